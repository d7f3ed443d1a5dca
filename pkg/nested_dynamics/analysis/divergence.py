import numpy as np
from scipy.special import rel_entr
from ..common import SupportMismatch, InvalidProfile, as_state
from ..dynamics.fields import as_rates
from ..profiles import rates_to_nkl_weights

class DivergenceSpec:
    """
    The nested KL divergence from a fixed reference point.

    Arguments:
        - tree: The similarity structure.
        - nkl_weights: w_1..w_N, with w_N = 1.
        - reference: The reference state p.
    """
    def __init__(self, tree, nkl_weights, reference):
        w = np.asarray(nkl_weights, dtype=float)

        if w.shape != (tree.depth,):
            raise InvalidProfile("Expected {} weights, got '{}'.".format(tree.depth, w))

        if np.any(w < 0) or abs(w[-1] - 1.0) > 1e-12:
            raise InvalidProfile("Weights must be nonnegative with w_N = 1, got '{}'.".format(w))

        self.tree = tree
        self.nkl_weights = w
        self.reference = as_state(reference, tree.n, tol=1e-9)

    @classmethod
    def from_rates(cls, tree, rates, reference):
        rates = as_rates(rates, tree)
        return cls(tree, rates_to_nkl_weights(rates.rates), reference)

    def with_reference(self, reference):
        return type(self)(self.tree, self.nkl_weights, reference)

def kl(p, x):
    """Σ_a p_a log(p_a / x_a)."""
    return float(rel_entr(np.asarray(p, dtype=float), np.asarray(x, dtype=float)).sum())

def nested_kl(spec, x):
    """
    D(p, x) = Σ_{ℓ=1..N} w_ℓ Σ_K p_K log(p_K / x_K) over the classes K at
    level ℓ.
    """
    x = np.asarray(x, dtype=float)
    tree = spec.tree
    total = 0.0

    for level in range(1, tree.depth + 1):
        terms = rel_entr(tree.class_masses(spec.reference, level),
                         tree.class_masses(x, level))
        total += spec.nkl_weights[level - 1] * terms.sum()

    if not np.isfinite(total):
        raise SupportMismatch("The reference is not supported by '{}'.".format(x))

    return float(total)
