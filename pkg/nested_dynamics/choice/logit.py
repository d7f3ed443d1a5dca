"""
Nested logit choice.

Class scores are aggregated bottom-up: the score of a class at level ℓ-1 is
τ_ℓ log Σ exp(y_child / τ_ℓ) over its children at level ℓ. A class at level ℓ
is then selected within its parent with probability
exp((y_K - y_parent) / τ_ℓ).
"""
import numpy as np
from scipy.special import logsumexp, softmax
from ..common import InvalidProfile
from ..profiles import TempProfile

def as_temps(temps, tree):
    if not isinstance(temps, TempProfile):
        temps = TempProfile(temps)

    if temps.depth != tree.depth:
        raise InvalidProfile("Expected {} temperatures for a tree of depth {}, got '{}'.".format(
            tree.depth, tree.depth, temps.temps))

    return temps

def logit(y, temp=1.0):
    """Plain logit choice: softmax of y / temp."""
    return softmax(np.asarray(y, dtype=float) / temp)

def class_scores(tree, temps, y):
    """
    Returns a list with the score of every class, one array per level 0..N.
    The level-N array equals y.
    """
    temps = as_temps(temps, tree)
    y = np.asarray(y, dtype=float)

    if y.shape != (tree.n,):
        raise ValueError("Expected {} scores, got shape '{}'.".format(tree.n, y.shape))

    scores = [None] * (tree.depth + 1)
    scores[tree.depth] = y.copy()

    for level in range(tree.depth, 0, -1):
        tau = temps.at(level)
        members = tree.child_matrix(level)
        scaled = np.where(members, scores[level][None, :] / tau, -np.inf)
        scores[level - 1] = tau * logsumexp(scaled, axis=1)

    return scores

class ScoreVector:
    """
    Action scores y together with the scores of all classes.
    """
    def __init__(self, tree, temps, y):
        self.tree = tree
        self.temps = as_temps(temps, tree)
        self.y = np.array(y, dtype=float)
        self.class_scores = class_scores(tree, self.temps, self.y)

    def score(self, c):
        return float(self.class_scores[c[0]][c[1]])

    @property
    def root(self):
        return float(self.class_scores[0][0])

def _log_choice(tree, temps, scores, level):
    """log P_K for every class at the given level, as a product of conditionals."""
    log_prob = np.zeros(tree.num_classes(level))
    representatives = np.array([tree.class_members(c)[0] for c in tree.classes(level)])

    for k in range(1, level + 1):
        own = scores[k][tree.assignment(k)[representatives]]
        parent = scores[k - 1][tree.assignment(k - 1)[representatives]]
        log_prob += (own - parent) / temps.at(k)

    return log_prob

def nlc(tree, temps, y):
    """
    The nested logit choice map: returns the strictly positive population
    state P(y).
    """
    temps = as_temps(temps, tree)
    scores = class_scores(tree, temps, y)
    log_prob = np.zeros(tree.n)

    for level in range(1, tree.depth + 1):
        own = scores[level][tree.assignment(level)]
        parent = scores[level - 1][tree.assignment(level - 1)]
        log_prob += (own - parent) / temps.at(level)

    x = np.exp(log_prob)
    return x / x.sum()

def class_probabilities(tree, temps, y, level):
    """The selection probability of every class at a level (product form)."""
    temps = as_temps(temps, tree)
    scores = class_scores(tree, temps, y)
    return np.exp(_log_choice(tree, temps, scores, level))

def conditional_probabilities(tree, temps, y, level):
    """
    The probability of selecting each class at a level given that its parent
    has been selected.
    """
    if level < 1:
        raise ValueError("Conditional probabilities need a level of at least 1, got '{}'.".format(level))

    temps = as_temps(temps, tree)
    scores = class_scores(tree, temps, y)
    representatives = np.array([tree.class_members(c)[0] for c in tree.classes(level)])
    parent = scores[level - 1][tree.assignment(level - 1)[representatives]]
    return np.exp((scores[level] - parent) / temps.at(level))
