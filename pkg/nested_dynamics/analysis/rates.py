import logging
import numpy as np
from ..common import NotDominated, WindowTooShort, as_state
from ..games import dominated_pairs
from ..dynamics.fields import as_rates
from ..dynamics.integrator import integrate
from .checks import lyapunov_difference

logger = logging.getLogger(__name__)

BOUND_TOL = 1e-8

class RateFitReport:
    """
    The fitted extinction exponent of a dominated action and the bound
    x_a(t) <= exp(c - Λ_deg δ t).

    Attributes:
        - slope, intercept: Least-squares fit of log x_a(t) on the window.
        - bound_rate: Λ_deg δ.
        - bound_constant: c = -Λ_deg V_ab(x(0)), where V_ab is the
          difference of nested KL divergences from the two vertices.
        - bound_satisfied: Whether the bound holds at every sample.
    """
    def __init__(self, action, dominator, margin, degree, slope, intercept,
                 bound_rate, bound_constant, bound_satisfied, window):
        self.action = action
        self.dominator = dominator
        self.margin = margin
        self.degree = degree
        self.slope = slope
        self.intercept = intercept
        self.bound_rate = bound_rate
        self.bound_constant = bound_constant
        self.bound_satisfied = bound_satisfied
        self.window = window

    def to_dict(self):
        return dict(vars(self))

    def __str__(self):
        return "<RateFitReport action={} slope={:g} bound=-{:g} satisfied={}>".format(
            self.action, self.slope, self.bound_rate, self.bound_satisfied)

    def __repr__(self):
        return str(self)

def _fit_log(times, values):
    slope, intercept = np.polyfit(times, np.log(values), 1)
    return float(slope), float(intercept)

def fit_extinction_rate(trajectory, action, dominator, margin, tree, rates, window=0.5):
    """
    Fits the exponential extinction rate of an action strictly dominated by
    another and checks the pointwise extinction bound.

    Arguments:
        - trajectory: A nested replicator Trajectory.
        - action: The dominated action a.
        - dominator: The dominating action b.
        - margin: The domination margin δ > 0.
        - tree, rates: The structure and rates the trajectory was run with.
        - window: The trailing fraction of the time span used in the fit.
    """
    if not margin > 0:
        raise NotDominated("Action {} is not strictly dominated by {} (margin '{}').".format(
            action, dominator, margin))

    rates = as_rates(rates, tree)
    indices = trajectory.window(window)

    if len(indices) < 3:
        raise WindowTooShort("Only {} samples in the trailing {} of the trajectory.".format(
            len(indices), window))

    slope, intercept = _fit_log(trajectory.times[indices], trajectory.states[indices, action])

    degree = tree.degree(action, dominator)
    bound_rate = rates.cumulative[degree] * margin
    constant = -rates.cumulative[degree] * lyapunov_difference(
        tree, rates, trajectory.initial, action, dominator)
    logs = np.log(trajectory.states[:, action])
    satisfied = bool(np.all(logs <= constant - bound_rate * trajectory.times + BOUND_TOL))

    return RateFitReport(action, dominator, float(margin), degree, slope,
                         intercept, float(bound_rate), float(constant),
                         satisfied, window)

def extinction_report(game, tree, rates, trajectory, action, window=0.5):
    """
    Fits the extinction rate of a dominated action of an affine game against
    the dominator that gives the strongest bound.
    """
    rates = as_rates(rates, tree)
    candidates = [(b, delta) for (a, b, delta) in dominated_pairs(game) if a == action]

    if not len(candidates):
        raise NotDominated("Action {} is not strictly dominated.".format(action))

    dominator, margin = max(
        candidates, key=lambda c: rates.cumulative[tree.degree(action, c[0])] * c[1])

    return fit_extinction_rate(trajectory, action, dominator, margin, tree,
                               rates, window=window)

def fit_convergence_rate(trajectory, x_star, window=0.5):
    """
    The exponent r of the fit ||x(t) - x*||_1 ~ exp(-r t) on the trailing
    window.
    """
    indices = trajectory.window(window)

    if len(indices) < 3:
        raise WindowTooShort("Only {} samples in the trailing {} of the trajectory.".format(
            len(indices), window))

    distances = np.abs(trajectory.states[indices] - np.asarray(x_star)).sum(axis=1)
    slope, _ = _fit_log(trajectory.times[indices], distances)
    return -slope

def strict_rate_bound(game, tree, rates, x_star):
    """
    The local convergence exponent toward a strict equilibrium a*:
    min over b != a* of Λ_{deg(a*,b)} [F_{a*}(x*) - F_b(x*)].
    """
    rates = as_rates(rates, tree)
    x_star = as_state(x_star, game.n)
    support = np.flatnonzero(x_star > 0)

    if len(support) != 1:
        raise ValueError("A strict equilibrium is a pure state, got '{}'.".format(x_star))

    best = int(support[0])
    F = game.payoff(x_star)

    return float(min(rates.cumulative[tree.degree(best, b)] * (F[best] - F[b])
                     for b in range(game.n) if b != best))

def check_strict_rate(game, tree, rates, trajectory, x_star, window=0.5, slack=0.1):
    """
    Compares the fitted local convergence exponent with (1 - slack) times
    the strict-equilibrium bound. The neighbourhood where the bound applies is
    not known, so a miss is logged as a warning rather than raised.
    """
    fitted = fit_convergence_rate(trajectory, x_star, window=window)
    bound = strict_rate_bound(game, tree, rates, x_star)
    ok = fitted >= (1 - slack) * bound

    if not ok:
        logger.warning("Fitted convergence exponent %g is below (1-%g) x %g.", fitted, slack, bound)

    return ok, fitted, bound

def simplex_grid(n, resolution, interior=True):
    """All states with coordinates in multiples of 1/resolution."""
    def compositions(total, parts):
        if parts == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    points = np.array(list(compositions(resolution, n)), dtype=float) / resolution

    if interior:
        points = points[np.all(points > 0, axis=1)]

    return points

def basin_census(field, starts, step=1e-2, t_end=40.0):
    """
    Integrates from each start and returns, for each, the action with the
    largest terminal share.
    """
    winners = []

    for x0 in starts:
        trajectory = integrate(field, x0, step=step, t_end=t_end,
                               sample_stride=max(1, int(round(t_end / step))))
        winners.append(int(np.argmax(trajectory.terminal)))

    return np.array(winners)
