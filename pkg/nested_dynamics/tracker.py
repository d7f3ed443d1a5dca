import abc
import numpy as np

class DiagnosticTracker:
    """
    Records a scalar (or a small vector) along a trajectory. Trackers are
    updated with each recorded (t, x) pair.
    """
    @abc.abstractmethod
    def update(self, t, x):
        raise NotImplementedError()

    @property
    @abc.abstractmethod
    def names(self):
        """The column names of the recorded values."""
        raise NotImplementedError()

    @property
    @abc.abstractmethod
    def values(self):
        """An array with one row per update and one column per name."""
        raise NotImplementedError()

    def reset(self):
        self._values = []

class FunctionTracker(DiagnosticTracker):
    def __init__(self, name, func):
        self.name = name
        self.func = func
        self._values = []

    def update(self, t, x):
        self._values.append(np.atleast_1d(self.func(x)).astype(float))

    @property
    def names(self):
        return [self.name]

    @property
    def values(self):
        return np.asarray(self._values).reshape(len(self._values), -1)

class PotentialTracker(FunctionTracker):
    def __init__(self, game):
        super().__init__("potential", game.potential)

class MeanPayoffTracker(FunctionTracker):
    def __init__(self, game):
        super().__init__("mean_payoff", game.mean_payoff)

class DivergenceTracker(FunctionTracker):
    """Tracks the nested KL divergence from a reference point."""
    def __init__(self, spec):
        from .analysis.divergence import nested_kl
        super().__init__("nested_kl", lambda x: nested_kl(spec, x))

class ClassShareTracker(DiagnosticTracker):
    def __init__(self, tree, level=1):
        self.tree = tree
        self.level = min(level, tree.depth)
        self._values = []

    def update(self, t, x):
        self._values.append(self.tree.class_masses(x, self.level))

    @property
    def names(self):
        # no commas: the names become CSV columns
        return ["class_" + "+".join(self.tree.actions.label(a)
                                    for a in self.tree.class_members(c))
                for c in self.tree.classes(self.level)]

    @property
    def values(self):
        return np.asarray(self._values).reshape(len(self._values), -1)

class TrackerGroup(DiagnosticTracker):
    def __init__(self, trackers=()):
        self.trackers = list(trackers)

    def update(self, t, x):
        for tracker in self.trackers:
            tracker.update(t, x)

    def reset(self):
        for tracker in self.trackers:
            tracker.reset()

    @property
    def names(self):
        return [name for tracker in self.trackers for name in tracker.names]

    @property
    def values(self):
        if not len(self.trackers):
            return None
        return np.hstack([tracker.values for tracker in self.trackers])

    def as_dict(self):
        values = self.values
        if values is None:
            return {}
        return {name: values[:, i] for i, name in enumerate(self.names)}

    def __len__(self):
        return len(self.trackers)
