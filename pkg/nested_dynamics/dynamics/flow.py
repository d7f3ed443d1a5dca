import numpy as np
from copy import deepcopy
from ..common import StepBlowup, PositivityLoss, BoundaryState

def rk4_step(field, x, h, k1=None):
    """
    One step of the classical fourth-order Runge-Kutta method. The slope at
    x may be passed in as k1.
    """
    if k1 is None:
        k1 = field(x)
    k2 = field(x + 0.5 * h * k1)
    k3 = field(x + 0.5 * h * k2)
    k4 = field(x + h * k3)
    return x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

class FlowState:
    """
    A point on an orbit of an autonomous vector field, advanced by fixed RK4
    steps.

    Arguments:
        - field: A callable z -> ż.
        - z0: The initial point.
        - step: The step size h.
        - t0: The initial time.
        - simplex: Whether z is a population state. Population states are
          renormalized after each step (if renormalize is set) and must keep
          their support.
        - renormalize: Divide by the coordinate sum after each step.
        - tracker: An optional DiagnosticTracker, updated with the observed
          state every track_every steps.
        - observe: An optional map from z to the observed population state
          (the identity by default).
    """
    def __init__(self, field, z0, step=1e-3, t0=0.0, simplex=True,
                 renormalize=True, tracker=None, track_every=1, observe=None):
        if not step > 0:
            raise ValueError("The step size must be positive, got '{}'.".format(step))

        self.field = field
        self.z0 = np.array(z0, dtype=float)
        self.h = float(step)
        self.t0 = float(t0)
        self.simplex = simplex
        self.renormalize = renormalize
        self.tracker = tracker
        self.track_every = int(track_every)
        self.observe = observe

        self.z = self.z0.copy()
        self.t = self.t0
        self.steps = 0
        self.support = self.z0 > 0

    def copy(self):
        return deepcopy(self)

    @staticmethod
    def _make_state(state):
        if state.tracker is not None and state.steps % state.track_every == 0:
            state.tracker.update(state.t, state.observation())
        return state

    def observation(self):
        if self.observe is None:
            return self.z
        return self.observe(self.z)

    def _init(self, inplace=False):
        state = self if inplace else self.copy()
        state.z = state.z0.copy()
        state.t = state.t0
        state.steps = 0
        state.support = state.z0 > 0

        if state.tracker is not None:
            state.tracker.reset()

        return state

    def init(self, inplace=False):
        """
        Returns the initial state.

        Arguments:
            * inplace: If inplace is true, the state should be modified in place
                       and self should be returned.
        """
        return self._make_state(self._init(inplace=inplace))

    def _next(self, inplace=False):
        state = self if inplace else self.copy()
        # a BoundaryState here concerns the current point and is passed on
        k1 = state.field(state.z)

        try:
            z = rk4_step(state.field, state.z, state.h, k1=k1)
        except BoundaryState as e:
            # an intermediate stage left the simplex
            raise PositivityLoss("{} at step {} (t={:g}).".format(e, state.steps + 1, state.t + state.h),
                                 step=state.steps + 1, t=state.t + state.h)

        if not np.all(np.isfinite(z)):
            raise StepBlowup("Non-finite state at step {} (t={:g}).".format(
                state.steps + 1, state.t + state.h), step=state.steps + 1, t=state.t + state.h)

        if state.simplex:
            if state.renormalize:
                z = z / z.sum()

            if np.any(z[state.support] <= 0):
                raise PositivityLoss("Action(s) '{}' lost positivity at step {} (t={:g}).".format(
                    np.flatnonzero(state.support & (z <= 0)), state.steps + 1, state.t + state.h),
                    step=state.steps + 1, t=state.t + state.h)

        state.z = z
        state.steps += 1
        state.t = state.t0 + state.steps * state.h
        return state

    def next(self, inplace=False):
        """
        Returns the state one step later. In the background, diagnostics
        are tracked.

        Arguments:
            * inplace: If inplace is true, the state should be modified in place
                       and self should be returned.
        """
        return self._make_state(self._next(inplace=inplace))

    @property
    def x(self):
        return self.observation()

class Trajectory:
    """
    A time-stamped sequence of states with optional per-sample diagnostics.

    Arguments:
        - times: The increasing sample times.
        - states: An array with one row per sample.
        - diagnostics: A dict mapping names to arrays with one entry per sample.
        - scores: An optional array of score vectors (one row per sample).
    """
    def __init__(self, times, states, diagnostics=None, scores=None, labels=None):
        self.times = np.asarray(times, dtype=float)
        self.states = np.asarray(states, dtype=float)
        self.diagnostics = {} if diagnostics is None else dict(diagnostics)
        self.scores = None if scores is None else np.asarray(scores, dtype=float)
        self.labels = labels

        if len(self.times) != len(self.states):
            raise ValueError("Got {} times but {} states.".format(len(self.times), len(self.states)))

    def __len__(self):
        return len(self.times)

    @property
    def n(self):
        return self.states.shape[1]

    @property
    def initial(self):
        return self.states[0]

    @property
    def terminal(self):
        return self.states[-1]

    def column(self, name):
        """Returns a diagnostic, or the share series of an action index."""
        if isinstance(name, str):
            return self.diagnostics[name]
        return self.states[:, name]

    def window(self, fraction):
        """
        Returns the indices of the samples in the trailing fraction of the
        time span.
        """
        start = self.times[-1] - fraction * (self.times[-1] - self.times[0])
        return np.flatnonzero(self.times >= start - 1e-12)

    def header(self):
        return (["t"] + ["x_{}".format(a) for a in range(self.n)] +
                list(self.diagnostics.keys()))

    def to_array(self):
        columns = [self.times[:, None], self.states]
        columns += [np.asarray(v, dtype=float).reshape(len(self), -1)
                    for v in self.diagnostics.values()]
        return np.hstack(columns)

    def to_csv(self, path):
        """Writes the trajectory with full double precision."""
        np.savetxt(path, self.to_array(), delimiter=",", fmt="%.17g",
                   header=",".join(self.header()), comments="")

    @classmethod
    def from_csv(cls, path):
        with open(path) as f:
            header = f.readline().strip().split(",")

        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        n = sum(1 for name in header if name.startswith("x_"))
        diagnostics = {name: data[:, 1 + n + i] for i, name in enumerate(header[1 + n:])}
        return cls(data[:, 0], data[:, 1:1 + n], diagnostics)
