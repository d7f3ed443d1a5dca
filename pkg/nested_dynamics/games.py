import abc
import logging
import numpy as np
from .common import (NonFinitePayoff, EmptyClassMass, UnsupportedKind,
                     as_state, vertex)

logger = logging.getLogger(__name__)

class Game:
    """
    A population game: a payoff field F mapping population states to payoff
    vectors.

    Arguments:
        - n: The number of actions.
        - labels: Optional action labels.
    """
    kind = "custom"

    def __init__(self, n, labels=None):
        self.n = int(n)
        self.labels = None if labels is None else list(labels)

    @abc.abstractmethod
    def _payoff(self, x):
        raise NotImplementedError()

    def payoff(self, x):
        """
        Returns the payoff vector F(x).
        """
        F = np.asarray(self._payoff(np.asarray(x, dtype=float)), dtype=float)

        if F.shape != (self.n,):
            raise ValueError("Payoff has shape '{}', expected ({},).".format(F.shape, self.n))

        if not np.all(np.isfinite(F)):
            raise NonFinitePayoff("Non-finite payoff '{}' at state '{}'.".format(F, x))

        return F

    def mean_payoff(self, x):
        x = np.asarray(x, dtype=float)
        return float(x @ self.payoff(x))

    @property
    def has_potential(self):
        return False

    def potential(self, x):
        raise UnsupportedKind("Game of kind '{}' has no potential.".format(self.kind))

    def __call__(self, x):
        return self.payoff(x)

    def __str__(self):
        return "<{} n={}>".format(type(self).__name__, self.n)

    def __repr__(self):
        return str(self)

class MatrixGame(Game):
    """
    A game with affine payoffs F(x) = Ax + b (random matching when b = 0).
    When A is symmetric the game is a potential game with
    Φ(x) = x·Ax/2 + b·x.
    """
    def __init__(self, A, b=None, labels=None):
        A = np.array(A, dtype=float)

        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("The payoff matrix must be square, got shape '{}'.".format(A.shape))

        super().__init__(len(A), labels=labels)
        self.A = A
        self.b = np.zeros(self.n) if b is None else np.array(b, dtype=float)

        if self.b.shape != (self.n,):
            raise ValueError("The payoff offset must have {} entries, got '{}'.".format(self.n, self.b))

        if not np.all(np.isfinite(self.A)) or not np.all(np.isfinite(self.b)):
            raise NonFinitePayoff("Non-finite entries in the payoff data.")

    @property
    def kind(self):
        return "matrix" if not np.any(self.b) else "affine"

    def _payoff(self, x):
        return self.A @ x + self.b

    @property
    def has_potential(self):
        return bool(np.allclose(self.A, self.A.T, rtol=0, atol=1e-12))

    def potential(self, x):
        if not self.has_potential:
            raise UnsupportedKind("The payoff matrix is not symmetric.")
        x = np.asarray(x, dtype=float)
        return float(0.5 * x @ self.A @ x + self.b @ x)

class CustomGame(Game):
    """
    A game given by an arbitrary payoff callable.

    Arguments:
        - n: The number of actions.
        - payoff: A callable x -> F(x).
        - potential: An optional callable x -> Φ(x) with F = ∇Φ.
    """
    def __init__(self, n, payoff, potential=None, labels=None):
        super().__init__(n, labels=labels)
        self._payoff_fn = payoff
        self._potential_fn = potential

    @property
    def kind(self):
        return "custom" if self._potential_fn is None else "potential"

    def _payoff(self, x):
        return self._payoff_fn(x)

    @property
    def has_potential(self):
        return self._potential_fn is not None

    def potential(self, x):
        if self._potential_fn is None:
            return super().potential(x)
        return float(self._potential_fn(np.asarray(x, dtype=float)))

def payoff(game, x):
    return game.payoff(x)

def mean_payoff(game, x):
    return game.mean_payoff(x)

def class_mean_payoffs(game, tree, x, level, F=None):
    """
    Returns the class-mean payoffs F̂_K(x) of every class at a level, together
    with the class masses. Classes of zero mass get a NaN mean.
    """
    x = np.asarray(x, dtype=float)
    if F is None:
        F = game.payoff(x)

    assign = tree.assignment(level)
    size = tree.num_classes(level)
    masses = np.bincount(assign, weights=x, minlength=size)
    totals = np.bincount(assign, weights=x * F, minlength=size)

    with np.errstate(invalid='ignore', divide='ignore'):
        means = np.where(masses > 0, totals / np.where(masses > 0, masses, 1.0), np.nan)

    return means, masses

def class_mean_payoff(game, tree, x, c):
    """
    The mean payoff F̂_K(x) of class c, weighting its members by their
    conditional shares.
    """
    x = np.asarray(x, dtype=float)
    members = tree.class_members(c)
    mass = x[members].sum()

    if not mass > 0:
        raise EmptyClassMass("Class '{}' has zero mass.".format(tree.label(c)))

    F = game.payoff(x)
    return float(x[members] @ F[members] / mass)

class EquilibriumReport:
    def __init__(self, point, payoffs, support, tol):
        self.point = point
        self.payoffs = payoffs
        self.support = support
        self.tol = tol

        supported = payoffs[support]
        self.restricted_violation = float(supported.max() - supported.min())
        self.max_violation = float(max(0.0, payoffs.max() - supported.min()))
        self.is_restricted_eq = self.restricted_violation <= tol
        self.is_nash = self.max_violation <= tol

        unsupported = np.setdiff1d(np.arange(len(point)), support)
        self.is_strict = bool(
            self.is_nash and len(support) == 1 and
            (not len(unsupported) or
                payoffs[support[0]] - payoffs[unsupported].max() > tol)
        )

    def to_dict(self, labels=None):
        def name(a):
            return int(a) if labels is None else labels[a]

        return {
            "point": self.point.tolist(),
            "payoffs": self.payoffs.tolist(),
            "support": [name(a) for a in self.support],
            "is_restricted_eq": bool(self.is_restricted_eq),
            "is_nash": bool(self.is_nash),
            "is_strict": bool(self.is_strict),
            "max_violation": self.max_violation,
            "restricted_violation": self.restricted_violation,
            "tol": self.tol
        }

    def __str__(self):
        return "<EquilibriumReport nash={} restricted={} strict={} violation={:g}>".format(
            self.is_nash, self.is_restricted_eq, self.is_strict, self.max_violation)

    def __repr__(self):
        return str(self)

def classify_point(game, x, tol=1e-9, support_tol=0.0):
    """
    Classifies a state as a restricted equilibrium and/or a Nash equilibrium.

    Arguments:
        - x: The state.
        - tol: Payoff tolerance.
        - support_tol: Shares at or below this value count as unused.
    """
    x = as_state(x, game.n, tol=max(1e-12, support_tol))
    F = game.payoff(x)
    support = np.flatnonzero(x > support_tol)
    return EquilibriumReport(x, F, support, tol)

def dominated_pairs(game):
    """
    Lists all pairs (a, b, δ) where action a is strictly dominated by action b
    with margin δ = min_x [F_b(x) - F_a(x)] > 0. The game must be affine, so
    that the minimum is attained at a vertex.
    """
    if not isinstance(game, MatrixGame):
        raise UnsupportedKind("Exact domination needs an affine game, got kind '{}'.".format(game.kind))

    # column j of the difference is (F_b - F_a)(e_j)
    gaps = game.A[None, :, :] - game.A[:, None, :] + (game.b[None, :] - game.b[:, None])[:, :, None]
    margins = gaps.min(axis=2)
    pairs = []

    for a in range(game.n):
        for b in range(game.n):
            if a != b and margins[a, b] > 0:
                pairs.append((a, b, float(margins[a, b])))

    return pairs

def sampled_domination(game, samples=1000, rng=None):
    """
    Estimates domination pairs of an arbitrary game from sampled states. The
    margins are upper bounds on the true ones, and a reported pair may fail
    to be dominated away from the sample.
    """
    rng = np.random.default_rng() if rng is None else rng
    points = np.vstack([np.eye(game.n), rng.dirichlet(np.ones(game.n), size=samples)])
    F = np.array([game.payoff(x) for x in points])
    margins = (F[:, None, :] - F[:, :, None]).min(axis=0)
    logger.debug("Sampled domination over %d states.", len(points))

    return [(a, b, float(margins[a, b]))
            for a in range(game.n) for b in range(game.n)
            if a != b and margins[a, b] > 0]

def check_potential(game, samples=100, step=1e-5, rng=None):
    """
    Returns the largest deviation between the payoff field and the central
    finite-difference gradient of the potential at sampled interior states.
    """
    if not game.has_potential:
        raise UnsupportedKind("Game of kind '{}' has no potential.".format(game.kind))

    rng = np.random.default_rng() if rng is None else rng
    worst = 0.0

    for x in rng.dirichlet(np.ones(game.n), size=samples):
        grad = np.empty(game.n)

        for a in range(game.n):
            e = vertex(game.n, a) * step
            grad[a] = (game.potential(x + e) - game.potential(x - e)) / (2 * step)

        worst = max(worst, float(np.abs(grad - game.payoff(x)).max()))

    return worst

def check_monotone(game, samples=1000, rng=None):
    """
    Returns the minimum and maximum of <F(x') - F(x), x' - x> over sampled
    pairs of states. A negative maximum indicates a strictly monotone game on
    the sample.
    """
    rng = np.random.default_rng() if rng is None else rng
    first = rng.dirichlet(np.ones(game.n), size=samples)
    second = rng.dirichlet(np.ones(game.n), size=samples)
    values = np.array([(game.payoff(y) - game.payoff(x)) @ (y - x)
                       for x, y in zip(first, second)])
    return float(values.min()), float(values.max())

def commuting_game():
    """
    Two bus lines and a car: bus users are hurt by bus congestion, the car by
    road congestion. Action 0 is strictly dominated by the car with margin 1.
    """
    A = -np.array([[2, 4, 6],
                   [3, 0, 6],
                   [1, 4, 8]], dtype=float)
    b = -np.array([5, 5, 2], dtype=float)
    return MatrixGame(A, b, labels=["bus1", "bus2", "car"])

def good_rps_game():
    """Rock-paper-scissors where a win pays 2 and a loss costs 1."""
    A = np.array([[0, -1, 2],
                  [2, 0, -1],
                  [-1, 2, 0]], dtype=float)
    return MatrixGame(A, labels=["rock", "paper", "scissors"])

def standard_rps_game():
    A = np.array([[0, -1, 1],
                  [1, 0, -1],
                  [-1, 1, 0]], dtype=float)
    return MatrixGame(A, labels=["rock", "paper", "scissors"])

def zero_game(n, labels=None):
    return MatrixGame(np.zeros((n, n)), labels=labels)

def coordination_game(n, labels=None):
    """A symmetric (hence potential) game rewarding coordination."""
    weights = np.arange(1, n + 1, dtype=float)
    return MatrixGame(np.diag(weights), labels=labels)

PRESETS = {
    "commuting": commuting_game,
    "good_rps": good_rps_game,
    "standard_rps": standard_rps_game,
}
