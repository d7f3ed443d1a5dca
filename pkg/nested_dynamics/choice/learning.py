"""
Score-based learning dynamics: ẏ = F(x), x = Q(y), where the choice map Q
is nested logit (exponential weights) or the entropy-regularized argmax
(regularized learning). Scores are unconstrained, so no renormalization is
involved.
"""
import functools
import numpy as np
from ..dynamics.integrator import integrate
from .logit import as_temps, nlc
from .entropy import RegularizedChoice

def score_field(game, choice):
    """The score dynamics y -> F(Q(y))."""
    def field(y):
        return game.payoff(choice(y))
    return field

def new_field(game, tree, temps):
    temps = as_temps(temps, tree)
    return score_field(game, functools.partial(nlc, tree, temps))

def _integrate_scores(game, choice, y0, step, t_end, sample_stride, trackers, show_times):
    y0 = np.asarray(y0, dtype=float)

    if y0.shape != (game.n,):
        raise ValueError("Expected {} initial scores, got shape '{}'.".format(game.n, y0.shape))

    trajectory = integrate(
        score_field(game, choice), y0, step=step, t_end=t_end,
        renormalize=False, sample_stride=sample_stride, trackers=trackers,
        simplex=False, observe=choice, show_times=show_times
    )
    return trajectory, trajectory.scores

def new_integrate(game, tree, temps, y0, step=1e-3, t_end=10.0,
                  sample_stride=10, trackers=(), show_times=False):
    """
    Integrates nested exponential weights from the scores y0.

    Returns the population-state Trajectory (with the scores attached) and
    the score array.
    """
    temps = as_temps(temps, tree)
    choice = functools.partial(nlc, tree, temps)
    return _integrate_scores(game, choice, y0, step, t_end, sample_stride, trackers, show_times)

def nrl_integrate(game, tree, weights, y0, step=1e-3, t_end=10.0,
                  sample_stride=10, trackers=(), solver_tol=1e-10, show_times=False):
    """
    Integrates regularized learning with the nested entropy, solving for the
    choice numerically at every stage.
    """
    choice = RegularizedChoice(tree, weights, solver_tol=solver_tol)
    return _integrate_scores(game, choice, y0, step, t_end, sample_stride, trackers, show_times)
