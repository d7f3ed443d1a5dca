import logging
import time
import numpy as np
import gymnasium as gym
from ..common import as_state, uniform_state
from .flow import FlowState

logger = logging.getLogger(__name__)

class PopulationDynamicsEnv(gym.Env):
    """
    Exposes a deterministic population dynamics run as a gymnasium
    environment. Each step advances the flow by one sampling interval
    (sample_stride integration steps); the only action is to continue.

    The run is truncated at the first sample time at or after t_end, so that
    every sample falls on the stride grid.

    Arguments:
        - field: The vector field z -> ż.
        - n: The number of actions.
        - step: The integration step h.
        - t_end: The time horizon.
        - sample_stride: Integration steps per environment step.
        - renormalize: Renormalize population states after each step.
        - simplex: Whether the integrated variable is a population state;
          if not (score dynamics), observe must map it to one.
        - observe: Maps the integrated variable to the observed state.
        - init: The default initial point: an array, "uniform" or "random".
        - reward_function: Maps observed states to rewards (mean payoff,
          typically); rewards are 0 without one.
        - tracker: An optional DiagnosticTracker, updated at every sample.
        - show_times: Log the wall-clock time of each environment step.
    """
    metadata = {"render_modes": []}

    def __init__(self, field, n, step=1e-3, t_end=10.0, sample_stride=10,
                 renormalize=True, simplex=True, observe=None, init="uniform",
                 reward_function=None, tracker=None, show_times=False):
        if not t_end >= 0:
            raise ValueError("The horizon must be nonnegative, got '{}'.".format(t_end))

        if int(sample_stride) != sample_stride or sample_stride < 1:
            raise ValueError("The sample stride must be a positive integer, got '{}'.".format(sample_stride))

        self.field = field
        self.n = int(n)
        self.step_size = float(step)
        self.t_end = float(t_end)
        self.sample_stride = int(sample_stride)
        self.renormalize = renormalize
        self.simplex = simplex
        self.observe = observe
        self.init = init
        self.reward_function = reward_function
        self.tracker = tracker
        self.show_times = show_times

        raw_steps = int(round(self.t_end / self.step_size))
        self.num_steps = -(-raw_steps // self.sample_stride) * self.sample_stride

        self.observation_space = gym.spaces.Box(0.0, 1.0, shape=(self.n,), dtype=np.float64)
        self.action_space = gym.spaces.Discrete(1)
        self._state = None

    def flow_state(self):
        """
        Returns the current FlowState. This is None before reset().
        """
        return self._state

    def _initial_point(self, options):
        options = {} if options is None else options
        init = options.get("z0", options.get("init", self.init))

        if isinstance(init, str):
            if init == "uniform":
                return uniform_state(self.n) if self.simplex else np.zeros(self.n)
            elif init == "random" and self.simplex:
                return self.np_random.dirichlet(np.ones(self.n))
            else:
                raise ValueError("Unknown initialization '{}'.".format(init))

        z0 = np.array(init, dtype=float)

        if self.simplex:
            z0 = as_state(z0, self.n, tol=1e-9)
        elif z0.shape != (self.n,) or not np.all(np.isfinite(z0)):
            raise ValueError("Malformed initial point '{}'.".format(z0))

        return z0

    def _observation(self):
        return np.array(self._state.observation(), dtype=float)

    def _info(self):
        return {"t": self._state.t, "steps": self._state.steps, "z": self._state.z.copy()}

    def reset(self, seed=None, options=None):
        super().reset(seed=seed)
        z0 = self._initial_point(options)

        self._state = FlowState(
            self.field, z0, step=self.step_size,
            simplex=self.simplex, renormalize=self.renormalize,
            tracker=self.tracker, track_every=self.sample_stride,
            observe=self.observe
        )
        self._state.init(inplace=True)

        return self._observation(), self._info()

    def step(self, action=0):
        if not self.action_space.contains(action):
            raise ValueError("Invalid action: '{}'.".format(action))

        if self._state is None:
            raise RuntimeError("Call reset() before step().")

        if self.show_times:
            start = time.perf_counter()

        remaining = self.num_steps - self._state.steps

        for _ in range(min(self.sample_stride, remaining)):
            self._state.next(inplace=True)

        if self.show_times:
            logger.info("Advanced to t=%g in %g s.", self._state.t, time.perf_counter() - start)

        obs = self._observation()
        reward = 0.0 if self.reward_function is None else float(self.reward_function(obs))
        truncated = self._state.steps >= self.num_steps

        return obs, reward, False, truncated, self._info()
