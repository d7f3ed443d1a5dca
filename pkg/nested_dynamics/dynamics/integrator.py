import logging
import numpy as np
from ..tracker import TrackerGroup
from .env import PopulationDynamicsEnv
from .flow import Trajectory

logger = logging.getLogger(__name__)

def run_env(env, seed=None, options=None):
    """
    Runs a PopulationDynamicsEnv until truncation and collects the samples
    into a Trajectory.
    """
    obs, info = env.reset(seed=seed, options=options)
    times, states, raw = [info["t"]], [obs], [info["z"]]
    truncated = env.num_steps == 0

    while not truncated:
        obs, _, _, truncated, info = env.step(0)
        times.append(info["t"])
        states.append(obs)
        raw.append(info["z"])

    diagnostics = {}
    if isinstance(env.tracker, TrackerGroup):
        diagnostics = env.tracker.as_dict()

    logger.debug("Integrated %d steps up to t=%g.", env.flow_state().steps, times[-1])

    return Trajectory(times, states, diagnostics,
                      scores=None if env.simplex else np.asarray(raw))

def integrate(field, x0, step=1e-3, t_end=10.0, renormalize=True,
              sample_stride=10, trackers=(), seed=None, **kwargs):
    """
    Integrates a vector field on the simplex with fixed-step RK4.

    Arguments:
        - field: A callable x -> ẋ.
        - x0: The initial state, or "uniform"/"random".
        - step: The step size h.
        - t_end: The time horizon.
        - renormalize: Divide by the coordinate sum after each step.
        - sample_stride: Steps between stored samples.
        - trackers: DiagnosticTrackers evaluated at each stored sample.
        - seed: Seeds the random initial state.
        - Remaining keyword arguments go to PopulationDynamicsEnv.

    Returns a Trajectory; raises StepBlowup or PositivityLoss on failure.
    """
    if isinstance(x0, str):
        init, n = x0, kwargs.pop("n")
    else:
        init = np.asarray(x0, dtype=float)
        n = len(init)

    tracker = TrackerGroup(trackers)

    env = PopulationDynamicsEnv(
        field, n, step=step, t_end=t_end, sample_stride=sample_stride,
        renormalize=renormalize, init=init,
        tracker=tracker if len(tracker) else None, **kwargs
    )

    return run_env(env, seed=seed)
