"""
Similarity structures: towers of nested partitions of a finite action set.

Level 0 is the single class holding every action and level N holds the
singletons. A class is addressed by a ClassId (level, index), with classes at
each level ordered by their smallest member, so that at level N the class
index coincides with the action index.
"""
import collections
import numpy as np
from .common import (NotAPartition, NotNested, EmptyClass,
                     LevelOutOfRange, InvalidClass)

ClassId = collections.namedtuple("ClassId", ["level", "index"])

class ActionSet:
    def __init__(self, n, labels=None):
        if int(n) != n or n < 1:
            raise ValueError("The number of actions must be a positive integer, got '{}'.".format(n))

        self.n = int(n)

        if labels is not None:
            labels = [str(l) for l in labels]

            if len(labels) != self.n:
                raise ValueError("Expected {} labels, got '{}'.".format(self.n, labels))

            if len(set(labels)) != self.n:
                raise ValueError("Labels must be distinct: '{}'.".format(labels))

        self.labels = labels

    def index(self, item):
        """
        Resolves an action given either as an index or as a label.
        """
        if isinstance(item, str):
            if self.labels is None or not item in self.labels:
                raise ValueError("Unknown action label '{}'.".format(item))
            return self.labels.index(item)

        if int(item) != item or not 0 <= item < self.n:
            raise ValueError("Action index out of range: '{}'.".format(item))

        return int(item)

    def label(self, a):
        if self.labels is None:
            return str(a)
        return self.labels[a]

    def __len__(self):
        return self.n

class SimilarityTree:
    """
    An immutable, validated similarity structure.

    Arguments:
        - actions: The ActionSet the structure lives on.
        - partitions: The full list of levels 0..N, each a list of classes
          given as lists of action indices.
    """
    def __init__(self, actions, partitions):
        self.actions = actions
        n = actions.n

        if len(partitions) < 2:
            raise ValueError("A similarity structure needs at least 2 levels, got '{}'.".format(len(partitions)))

        self._members = []
        self._assign = np.empty((len(partitions), n), dtype=int)

        for level, partition in enumerate(partitions):
            classes = []
            covered = np.zeros(n, dtype=int)

            for members in partition:
                members = np.unique(np.asarray(list(members), dtype=int))

                if not len(members):
                    raise EmptyClass("Empty class at level {}.".format(level))

                if members.min() < 0 or members.max() >= n:
                    raise NotAPartition("Action index out of range at level {}: '{}'.".format(level, members))

                covered[members] += 1
                classes.append(members)

            if np.any(covered > 1):
                raise NotAPartition("Overlapping classes at level {}: actions '{}'.".format(
                    level, np.flatnonzero(covered > 1)))

            if np.any(covered == 0):
                raise NotAPartition("Actions '{}' are not covered at level {}.".format(
                    np.flatnonzero(covered == 0), level))

            classes.sort(key=lambda m: m[0])

            for index, members in enumerate(classes):
                self._assign[level, members] = index

            self._members.append(classes)

        if len(self._members[0]) != 1:
            raise NotAPartition("Level 0 must be the single class of all actions.")

        if len(self._members[-1]) != n:
            raise NotAPartition("The finest level must consist of singletons.")

        self._parents = [None]

        for level in range(1, self.depth + 1):
            parents = np.empty(len(self._members[level]), dtype=int)

            for index, members in enumerate(self._members[level]):
                up = np.unique(self._assign[level-1, members])

                if len(up) != 1:
                    raise NotNested("Class {} at level {} straddles parents '{}'.".format(
                        members.tolist(), level, up))

                parents[index] = up[0]

            self._parents.append(parents)

        self._child_matrices = [None] + [
            np.arange(self.num_classes(level-1))[:, None] == self._parents[level][None, :]
            for level in range(1, self.depth + 1)
        ]

    @property
    def n(self):
        return self.actions.n

    @property
    def depth(self):
        """The number N of nontrivial refinement levels."""
        return len(self._members) - 1

    @property
    def root(self):
        return ClassId(0, 0)

    @property
    def partitions(self):
        """The levels 0..N as nested lists of action indices."""
        return [[m.tolist() for m in classes] for classes in self._members]

    @property
    def lineage_table(self):
        """
        An (N+1) x n array whose entry (ℓ, a) is the index of the level-ℓ
        class containing a.
        """
        return self._assign.copy()

    def _check_level(self, level):
        if int(level) != level or not 0 <= level <= self.depth:
            raise LevelOutOfRange("Level '{}' is outside 0..{}.".format(level, self.depth))

    def _check_class(self, c):
        try:
            level, index = c
        except (TypeError, ValueError):
            raise InvalidClass("Not a class handle: '{}'.".format(c))

        if not 0 <= level <= self.depth or not 0 <= index < len(self._members[level]):
            raise InvalidClass("No class '{}' in this tree.".format(c))

        return ClassId(level, index)

    def num_classes(self, level):
        self._check_level(level)
        return len(self._members[level])

    def classes(self, level):
        return [ClassId(level, i) for i in range(self.num_classes(level))]

    def all_classes(self):
        return [c for level in range(self.depth + 1) for c in self.classes(level)]

    def assignment(self, level):
        """For each action, the index of its class at the given level."""
        self._check_level(level)
        return self._assign[level]

    def child_matrix(self, level):
        """
        A boolean matrix with one row per class at level-1 and one column per
        class at level; entry (p, c) is true iff c is a child of p.
        """
        self._check_level(level)
        if level == 0:
            raise LevelOutOfRange("The root level has no parents.")
        return self._child_matrices[level]

    def ancestor(self, action, level):
        self._check_level(level)
        action = self.actions.index(action)
        return ClassId(level, int(self._assign[level, action]))

    def singleton(self, action):
        return self.ancestor(action, self.depth)

    def degree(self, a, b):
        """
        The degree of similarity: the finest level ℓ in 0..N-1 at which a and
        b share a class. An action compared with itself has degree N-1.
        """
        a = self.actions.index(a)
        b = self.actions.index(b)
        same = self._assign[:self.depth, a] == self._assign[:self.depth, b]
        # same[0] always holds, and equality is inherited by coarser levels
        return int(np.flatnonzero(same)[-1])

    def class_members(self, c):
        level, index = self._check_class(c)
        return self._members[level][index].copy()

    def class_size(self, c):
        level, index = self._check_class(c)
        return len(self._members[level][index])

    def parent(self, c):
        level, index = self._check_class(c)
        if level == 0:
            return None
        return ClassId(level-1, int(self._parents[level][index]))

    def children(self, c):
        level, index = self._check_class(c)
        if level == self.depth:
            return []
        return [ClassId(level+1, int(i))
                for i in np.flatnonzero(self._parents[level+1] == index)]

    def lineage(self, c):
        """The chain of classes from the root down to c."""
        c = self._check_class(c)
        chain = [c]

        while chain[-1].level > 0:
            chain.append(self.parent(chain[-1]))

        return chain[::-1]

    def action_lineage(self, action):
        action = self.actions.index(action)
        return [ClassId(level, int(self._assign[level, action]))
                for level in range(self.depth + 1)]

    def class_masses(self, x, level):
        """The population share x_K of every class at the given level."""
        return np.bincount(self.assignment(level), weights=x,
                           minlength=self.num_classes(level))

    def class_mass(self, x, c):
        return float(np.sum(np.asarray(x)[self.class_members(c)]))

    def label(self, c):
        members = self.class_members(c)
        return "{" + ",".join(self.actions.label(a) for a in members) + "}"

    def __eq__(self, other):
        if not isinstance(other, SimilarityTree):
            return NotImplemented
        return (self._assign.shape == other._assign.shape and
                bool(np.array_equal(self._assign, other._assign)))

    def __hash__(self):
        return hash(self._assign.tobytes())

    def __str__(self):
        return "<SimilarityTree n={} N={} {}>".format(self.n, self.depth, self.partitions)

    def __repr__(self):
        return str(self)

def _resolve_level(actions, level):
    return [[actions.index(item) for item in members] for members in level]

def _is_trivial(level, n):
    return len(level) == 1 and sorted(level[0]) == list(range(n))

def _is_singletons(level, n):
    return len(level) == n and sorted(len(m) for m in level) == [1] * n

def build_tree(n, partitions=(), labels=None):
    """
    Builds a similarity structure.

    Arguments:
        - n: The number of actions.
        - partitions: Either the interior levels 1..N-1 or the full list of
          levels 0..N; each level is a list of classes and each class a list
          of action indices or labels.
        - labels: Optional action labels.
    """
    actions = ActionSet(n, labels)
    levels = [_resolve_level(actions, level) for level in partitions]

    full = (len(levels) >= 2 and _is_trivial(levels[0], n) and
            _is_singletons(levels[-1], n))

    if not full:
        levels = ([[list(range(n))]] + levels +
                  [[[a] for a in range(n)]])

    return SimilarityTree(actions, levels)

def flat_tree(n, labels=None):
    """The N=1 structure: the root and the singletons."""
    return build_tree(n, [], labels=labels)

def random_tree(n, depth, rng):
    """
    Draws a random similarity structure with the given depth N by merging
    classes of each finer level at random.

    Arguments:
        - n: The number of actions.
        - depth: N >= 1.
        - rng: A numpy Generator.
    """
    if depth < 1:
        raise ValueError("Depth must be at least 1, got '{}'.".format(depth))

    finer = [[a] for a in range(n)]
    levels = [finer]

    for _ in range(depth - 1):
        num_groups = int(rng.integers(1, len(finer) + 1))
        groups = rng.integers(0, num_groups, size=len(finer))
        coarser = [sum((finer[i] for i in np.flatnonzero(groups == g)), [])
                   for g in np.unique(groups)]
        levels.append(coarser)
        finer = coarser

    # the full list, so that a trivial or singleton draw stays an interior level
    levels.append([list(range(n))])
    return build_tree(n, levels[::-1])
