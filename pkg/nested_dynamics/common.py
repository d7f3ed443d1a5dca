import numbers
import numpy as np

SIMPLEX_TOL = 1e-12

class NestedDynamicsError(Exception):
    pass

class InvalidTree(NestedDynamicsError, ValueError):
    pass

class NotAPartition(InvalidTree):
    pass

class NotNested(InvalidTree):
    pass

class EmptyClass(InvalidTree):
    pass

class LevelOutOfRange(NestedDynamicsError, IndexError):
    pass

class InvalidClass(NestedDynamicsError, ValueError):
    pass

class NonFinitePayoff(NestedDynamicsError, ArithmeticError):
    pass

class EmptyClassMass(NestedDynamicsError, ZeroDivisionError):
    pass

class UnsupportedKind(NestedDynamicsError, TypeError):
    pass

class BoundaryState(NestedDynamicsError, ValueError):
    pass

class InvalidProfile(NestedDynamicsError, ValueError):
    pass

class IntegrationError(NestedDynamicsError, RuntimeError):
    def __init__(self, message, step=None, t=None):
        super().__init__(message)
        self.step = step
        self.t = t

class StepBlowup(IntegrationError):
    pass

class PositivityLoss(IntegrationError):
    pass

class NoConvergence(NestedDynamicsError, RuntimeError):
    pass

class SupportMismatch(NestedDynamicsError, ValueError):
    pass

class WindowTooShort(NestedDynamicsError, ValueError):
    pass

class NotDominated(NestedDynamicsError, ValueError):
    pass

class NotGESS(NestedDynamicsError, ValueError):
    pass

class NotConverged(NestedDynamicsError, RuntimeError):
    pass

class ConfigError(NestedDynamicsError, ValueError):
    pass

def as_state(x, n=None, tol=SIMPLEX_TOL):
    """
    Converts x into a float vector and checks that it is a population state:
    nonnegative shares summing to one.

    Arguments:
        - x: The candidate state.
        - n: The expected number of actions (optional).
        - tol: Tolerance on the coordinate sum.
    """
    x = np.asarray(x, dtype=float)

    if x.ndim != 1:
        raise BoundaryState("A state must be a vector, got shape '{}'.".format(x.shape))

    if n is not None and len(x) != n:
        raise BoundaryState("Expected a state with {} entries, got '{}'.".format(n, len(x)))

    if not np.all(np.isfinite(x)) or np.any(x < 0):
        raise BoundaryState("State has negative or non-finite entries: '{}'.".format(x))

    if abs(x.sum() - 1.0) > tol * max(1, len(x)):
        raise BoundaryState("State does not lie on the simplex (sum '{}').".format(x.sum()))

    return x

def is_interior(x):
    return bool(np.all(np.asarray(x) > 0))

def vertex(n, a):
    """Returns the pure state e_a."""
    e = np.zeros(n)
    e[a] = 1.0
    return e

def uniform_state(n):
    return np.full(n, 1.0 / n)

def parse_vector(text):
    """
    Parses a comma-separated list of numbers such as '0.25,0.75'.
    """
    if isinstance(text, numbers.Number):
        return np.array([float(text)])

    if not isinstance(text, str):
        return np.asarray(text, dtype=float)

    items = [item.strip() for item in text.split(",") if len(item.strip())]

    if not len(items):
        raise ValueError("Empty vector '{}'.".format(text))

    try:
        return np.array([float(item) for item in items])
    except ValueError:
        raise ValueError("Malformed vector '{}'.".format(text))
