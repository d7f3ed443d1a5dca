import logging
import numpy as np
from scipy.special import logsumexp, xlogy
from ..common import NoConvergence, BoundaryState, uniform_state
from ..profiles import TempProfile, WeightProfile
from .logit import as_temps

logger = logging.getLogger(__name__)

def entropy_weights(tree, weights):
    """
    Resolves entropy weights c_0..c_N from a TempProfile, a WeightProfile or
    a plain vector.
    """
    if isinstance(weights, TempProfile):
        c = weights.entropy_weights()
    elif isinstance(weights, WeightProfile):
        c = weights.entropy_weights
    else:
        c = np.asarray(weights, dtype=float)

    if len(c) != tree.depth + 1:
        raise ValueError("Expected {} entropy weights, got '{}'.".format(tree.depth + 1, c))

    return c

def nested_entropy(tree, weights, x):
    """h(x) = Σ_ℓ c_ℓ Σ_K x_K log x_K, with 0 log 0 = 0."""
    c = entropy_weights(tree, weights)
    x = np.asarray(x, dtype=float)
    total = 0.0

    for level in range(tree.depth + 1):
        masses = tree.class_masses(x, level)
        total += c[level] * xlogy(masses, masses).sum()

    return float(total)

def class_nested_entropy(tree, weights, x, c):
    """
    The nested entropy relative to class c at level ℓ:
    Σ_{k >= ℓ} c_k Σ_{K' ⊆ c at level k} x_{K'} log x_{K'}.
    """
    weights = entropy_weights(tree, weights)
    x = np.asarray(x, dtype=float)
    inside = np.zeros(tree.n, dtype=bool)
    inside[tree.class_members(c)] = True
    total = 0.0

    for level in range(c[0], tree.depth + 1):
        masses = tree.class_masses(np.where(inside, x, 0.0), level)
        total += weights[level] * xlogy(masses, masses).sum()

    return float(total)

def restricted_entropy(tree, weights, x, c):
    """The nested entropy relative to c, or +inf if x is not supported in c."""
    x = np.asarray(x, dtype=float)
    outside = np.ones(tree.n, dtype=bool)
    outside[tree.class_members(c)] = False

    if np.any(x[outside] > 0):
        return np.inf

    return class_nested_entropy(tree, weights, x, c)

def conditional_entropy(tree, temps, x, c):
    """
    The conditional entropy of x within class c at level ℓ < N,
    τ_{ℓ+1} Σ_{children C} x_C log(x_C / x_c); zero for singletons.
    """
    temps = as_temps(temps, tree)
    level = c[0]

    if level == tree.depth:
        return 0.0

    x = np.asarray(x, dtype=float)
    mass = tree.class_mass(x, c)
    children = np.array([tree.class_mass(x, child) for child in tree.children(c)])
    return float(temps.at(level + 1) * (xlogy(children, children).sum() - xlogy(mass, mass)))

def _log_class_masses(tree, log_x, level):
    assign = tree.assignment(level)
    scaled = np.where(assign[None, :] == np.arange(tree.num_classes(level))[:, None],
                      log_x[None, :], -np.inf)
    return logsumexp(scaled, axis=1)[assign]

def entropy_gradient(tree, weights, log_x):
    """
    ∇h at x = exp(log_x), up to an additive constant:
    Σ_{ℓ >= 1} c_ℓ log x_{K_ℓ(a)}.
    """
    c = entropy_weights(tree, weights)
    grad = np.zeros(tree.n)

    for level in range(1, tree.depth + 1):
        if c[level] != 0:
            grad += c[level] * _log_class_masses(tree, log_x, level)

    return grad

def mirror_scores(tree, weights, x):
    """
    Scores y = ∇h(x) whose regularized choice (and nested logit choice) is
    the interior state x.
    """
    x = np.asarray(x, dtype=float)

    if np.any(x <= 0):
        raise BoundaryState("Mirror scores need an interior state, got '{}'.".format(x))

    return entropy_gradient(tree, weights, np.log(x))

def regularized_objective(tree, weights, y, x):
    return float(np.asarray(y) @ np.asarray(x) - nested_entropy(tree, weights, x))

def regularized_argmax(tree, weights, y, solver_tol=1e-10, max_iter=100000,
                       x_init=None, return_iterations=False):
    """
    Maximizes <y, x> - h(x) over the simplex by entropic mirror ascent with
    step 1/τ_1.

    Arguments:
        - weights: Entropy weights c_0..c_N (or a profile).
        - y: The score vector.
        - solver_tol: Tolerance on the KKT residual max(g) - min(g), where
          g = y - ∇h(x).
        - max_iter: Iteration limit; NoConvergence is raised beyond it.
        - x_init: An interior starting point (uniform by default).
    """
    c = entropy_weights(tree, weights)
    y = np.asarray(y, dtype=float)
    eta = 1.0 / c[1:].sum()

    x0 = uniform_state(tree.n) if x_init is None else np.asarray(x_init, dtype=float)
    log_x = np.log(x0)
    log_x -= logsumexp(log_x)

    for iteration in range(max_iter + 1):
        g = y - entropy_gradient(tree, c, log_x)
        residual = g.max() - g.min()

        if residual <= solver_tol:
            x = np.exp(log_x)
            x /= x.sum()

            if return_iterations:
                return x, iteration

            return x

        log_x = log_x + eta * g
        log_x -= logsumexp(log_x)

    raise NoConvergence("Mirror ascent did not converge in {} iterations (residual {:g}).".format(
        max_iter, residual))

class RegularizedChoice:
    """
    The regularized choice map y -> argmax {<y, x> - h(x)}, warm-started at
    its previous solution.
    """
    def __init__(self, tree, weights, solver_tol=1e-10, max_iter=100000):
        self.tree = tree
        self.weights = entropy_weights(tree, weights)
        self.solver_tol = solver_tol
        self.max_iter = max_iter
        self._last = None

    def __call__(self, y):
        x = regularized_argmax(self.tree, self.weights, y,
                               solver_tol=self.solver_tol,
                               max_iter=self.max_iter, x_init=self._last)
        self._last = x
        return x
