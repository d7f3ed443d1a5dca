"""
Numerical checks of the identities and stability properties of the nested
replicator dynamics. Each check returns a residual (or a small report) that
the caller compares against a tolerance.
"""
import logging
import numpy as np
from scipy.integrate import simpson
from scipy.spatial.distance import pdist
from ..common import (NotGESS, NotConverged, UnsupportedKind, vertex)
from ..games import classify_point, class_mean_payoffs
from ..profiles import rates_to_temps
from ..dynamics.fields import as_rates, nrd_field, class_field, make_field
from ..dynamics.protocol import nppi_switch_rates, mean_dynamics
from ..dynamics.flow import rk4_step
from ..dynamics.integrator import integrate
from ..choice.logit import as_temps, class_scores, nlc, class_probabilities
from ..choice.entropy import (mirror_scores, regularized_argmax,
                              regularized_objective)
from ..choice.learning import new_field, new_integrate
from .divergence import DivergenceSpec, nested_kl

logger = logging.getLogger(__name__)

def random_interior_states(n, samples, rng):
    return rng.dirichlet(np.ones(n), size=samples)

def check_tangency(field, states):
    """The largest |Σ_a ẋ_a| over the given states."""
    return float(max(abs(np.sum(field(x))) for x in states))

def check_protocol_consistency(game, tree, rates, states):
    """
    The largest L∞ gap between the mean dynamics of the nested imitation
    protocol and the nested replicator field.
    """
    worst = 0.0

    for x in states:
        rho = nppi_switch_rates(tree, rates, game.payoff(x), x)
        gap = np.abs(mean_dynamics(rho, x) - nrd_field(game, tree, rates, x)).max()
        worst = max(worst, float(gap))

    return worst

def check_class_aggregation(game, tree, rates, states):
    """
    The largest gap between summed action velocities and the class dynamics
    over all classes and the given states.
    """
    worst = 0.0

    for x in states:
        velocity = nrd_field(game, tree, rates, x)

        for level in range(1, tree.depth + 1):
            summed = np.bincount(tree.assignment(level), weights=velocity,
                                 minlength=tree.num_classes(level))
            gap = np.abs(summed - class_field(game, tree, rates, x, level)).max()
            worst = max(worst, float(gap))

    return worst

def _central_difference(func, field, x, h):
    forward = rk4_step(field, x, h)
    backward = rk4_step(field, x, -h)
    return (func(forward) - func(backward)) / (2 * h)

def check_dkl_identity(game, tree, rates, x, p, h=1e-4):
    """
    Residual of d/dt D(p, x(t)) = <F(x), x - p> along the nested replicator
    flow through x, with the derivative taken by central differences.
    """
    x = np.asarray(x, dtype=float)
    spec = DivergenceSpec.from_rates(tree, rates, p)
    field = make_field("nrd", game, tree, rates)
    derivative = _central_difference(lambda z: nested_kl(spec, z), field, x, h)
    return float(abs(derivative - game.payoff(x) @ (x - spec.reference)))

def lyapunov_difference(tree, rates, x, a, b):
    """V_ab(x) = D(e_a, x) - D(e_b, x)."""
    spec = DivergenceSpec.from_rates(tree, rates, vertex(tree.n, a))
    return nested_kl(spec, x) - nested_kl(spec.with_reference(vertex(tree.n, b)), x)

def check_paydiff_identity(game, tree, rates, x, a, b, h=1e-4):
    """
    Residual of d/dt [D(e_a, x) - D(e_b, x)] = F_b(x) - F_a(x) at x.
    """
    x = np.asarray(x, dtype=float)
    field = make_field("nrd", game, tree, rates)
    derivative = _central_difference(
        lambda z: lyapunov_difference(tree, rates, z, a, b), field, x, h)
    F = game.payoff(x)
    return float(abs(derivative - (F[b] - F[a])))

def check_paydiff_integral(game, tree, rates, trajectory, a, b):
    """
    Residual of V_ab(x(T)) - V_ab(x(0)) = ∫ [F_b - F_a] dt along a stored
    nested replicator trajectory.
    """
    gaps = np.array([game.payoff(x)[b] - game.payoff(x)[a] for x in trajectory.states])
    integral = simpson(gaps, x=trajectory.times)
    change = (lyapunov_difference(tree, rates, trajectory.terminal, a, b) -
              lyapunov_difference(tree, rates, trajectory.initial, a, b))
    return float(abs(change - integral))

def potential_rate(game, tree, rates, x):
    """
    The rate of change of the potential along the nested replicator
    dynamics, Σ_k λ_k Σ_K x_K Var_K(F): a rate-weighted sum of conditional
    payoff variances within classes.
    """
    rates = as_rates(rates, tree)
    x = np.asarray(x, dtype=float)
    F = game.payoff(x)
    total = 0.0

    for level, rate in enumerate(rates.rates):
        assign = tree.assignment(level)
        means, masses = class_mean_payoffs(game, tree, x, level, F=F)
        means = np.nan_to_num(means)
        # Σ_{a∈K} x_a (F_a - F̂_K)^2 = x_K Var_K(F)
        total += rate * np.sum(x * (F - means[assign]) ** 2)

    return float(total)

class PotentialAscentReport:
    def __init__(self, min_delta, rate_residual):
        self.min_delta = min_delta
        self.rate_residual = rate_residual

    def passed(self, delta_tol=1e-9, rate_tol=1e-8):
        return (self.min_delta >= -delta_tol and
                (self.rate_residual is None or self.rate_residual <= rate_tol))

def check_potential_ascent(game, trajectory, tree=None, rates=None,
                           samples=100, rng=None):
    """
    Returns the smallest step-to-step change of the potential along the
    trajectory and, given a tree and rates, the largest gap between
    potential_rate and <∇Φ, ẋ> at sampled interior states.
    """
    if not game.has_potential:
        raise UnsupportedKind("Game of kind '{}' has no potential.".format(game.kind))

    values = np.array([game.potential(x) for x in trajectory.states])
    min_delta = float(np.diff(values).min()) if len(values) > 1 else 0.0
    rate_residual = None

    if tree is not None and rates is not None:
        rng = np.random.default_rng() if rng is None else rng
        rate_residual = 0.0

        for x in random_interior_states(game.n, samples, rng):
            direct = game.payoff(x) @ nrd_field(game, tree, rates, x)
            rate_residual = max(rate_residual, abs(direct - potential_rate(game, tree, rates, x)))

        rate_residual = float(rate_residual)

    return PotentialAscentReport(min_delta, rate_residual)

def validate_gess(game, x_star, samples=10000, rng=None):
    """
    Sampled certificate for a globally evolutionarily stable state: returns
    the largest <F(x), x - x*> over sampled states and raises NotGESS when it
    is not negative.
    """
    rng = np.random.default_rng() if rng is None else rng
    x_star = np.asarray(x_star, dtype=float)
    points = rng.dirichlet(np.ones(game.n), size=samples)
    values = np.array([game.payoff(x) @ (x - x_star) for x in points])
    worst = int(np.argmax(values))

    if values[worst] >= 0:
        raise NotGESS("<F(x), x - x*> = {:g} >= 0 at x = '{}'.".format(values[worst], points[worst]))

    return float(values[worst])

class GessReport:
    def __init__(self, divergences, max_increase, terminal_distance, tol, threshold):
        self.divergences = divergences
        self.max_increase = max_increase
        self.terminal_distance = terminal_distance
        self.decreasing = max_increase <= tol
        self.converged = terminal_distance <= threshold

    @property
    def passed(self):
        return self.decreasing and self.converged

def check_gess_attraction(game, tree, rates, x_star, trajectory, tol=1e-10,
                          threshold=1e-4, samples=10000, rng=None):
    """
    Checks that D(x*, x(t)) decreases along a nested replicator trajectory
    and that the trajectory ends within threshold (L1) of x*.

    Raises NotGESS when x* fails the sampled stability certificate.
    """
    validate_gess(game, x_star, samples=samples, rng=rng)
    spec = DivergenceSpec.from_rates(tree, rates, x_star)
    divergences = np.array([nested_kl(spec, x) for x in trajectory.states])
    max_increase = float(np.diff(divergences).max()) if len(divergences) > 1 else 0.0
    distance = float(np.abs(trajectory.terminal - spec.reference).sum())

    return GessReport(divergences, max_increase, distance, tol, threshold)

def terminal_diameter(trajectory, window=0.1):
    states = trajectory.states[trajectory.window(window)]
    if len(states) < 2:
        return 0.0
    return float(pdist(states, "cityblock").max())

def check_nash_limit(game, trajectory, tol=1e-6, window=0.1):
    """
    Declares the trajectory converged when its terminal window has L1
    diameter below tol and checks that the terminal average is a Nash
    equilibrium within 10 tol.

    Raises NotConverged otherwise.
    """
    diameter = terminal_diameter(trajectory, window)

    if diameter >= tol:
        raise NotConverged("Terminal window diameter {:g} exceeds '{}'.".format(diameter, tol))

    limit = trajectory.states[trajectory.window(window)].mean(axis=0)
    limit = limit / limit.sum()
    report = classify_point(game, limit, tol=10 * tol, support_tol=10 * tol)
    logger.debug("Limit point %s: %s", limit, report)
    return report.is_nash

def check_class_score_derivative(game, tree, temps, y, h=1e-4):
    """
    The largest gap between the central-difference derivative of the class
    scores along the exponential weights flow and the class-mean payoffs.
    """
    temps = as_temps(temps, tree)
    y = np.asarray(y, dtype=float)
    field = new_field(game, tree, temps)
    forward = class_scores(tree, temps, rk4_step(field, y, h))
    backward = class_scores(tree, temps, rk4_step(field, y, -h))
    x = nlc(tree, temps, y)
    F = game.payoff(x)
    worst = 0.0

    for level in range(tree.depth + 1):
        derivative = (forward[level] - backward[level]) / (2 * h)
        means, _ = class_mean_payoffs(game, tree, x, level, F=F)
        worst = max(worst, float(np.abs(derivative - means).max()))

    return worst

def check_class_probabilities(tree, temps, y):
    """
    The largest gap between the summed nested logit shares of each class and
    the product of its conditional selection probabilities.
    """
    x = nlc(tree, temps, y)
    worst = 0.0

    for level in range(tree.depth + 1):
        summed = tree.class_masses(x, level)
        worst = max(worst, float(np.abs(summed - class_probabilities(tree, temps, y, level)).max()))

    return worst

def check_nlc_argmax(tree, temps, y, solver_tol=1e-10):
    """
    Returns the L∞ gap between nested logit choice and the numerical
    regularized argmax, and the gap between the attained objective and the
    root class score.
    """
    temps = as_temps(temps, tree)
    weights = temps.entropy_weights()
    x = regularized_argmax(tree, weights, y, solver_tol=solver_tol)
    choice_gap = float(np.abs(x - nlc(tree, temps, y)).max())
    value_gap = float(abs(regularized_objective(tree, weights, y, x) -
                          class_scores(tree, temps, y)[0][0]))
    return choice_gap, value_gap

def compare_nrd_new(game, tree, rates, x0, step=1e-3, t_end=20.0, sample_stride=10):
    """
    Integrates the nested replicator dynamics from x0 and the exponential
    weights with the equivalent temperatures from scores choosing x0.
    Returns the largest L∞ gap between the two state trajectories.
    """
    rates = as_rates(rates, tree)
    temps = rates_to_temps(rates.rates)
    nrd = integrate(make_field("nrd", game, tree, rates), x0, step=step,
                    t_end=t_end, sample_stride=sample_stride)
    y0 = mirror_scores(tree, as_temps(temps, tree), x0)
    new, _ = new_integrate(game, tree, temps, y0, step=step, t_end=t_end,
                           sample_stride=sample_stride)
    return float(np.abs(nrd.states - new.states).max())
