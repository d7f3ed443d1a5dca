"""
The equivalent parameterizations of nesting intensity.

    rates λ_0..λ_{N-1}        (revision probabilities per level)
    temperatures τ_1..τ_N     (uncertainty per level of the nested logit)
    NKL weights w_1..w_N      (nested KL divergence)
    entropy weights c_0..c_N  (nested entropy)

With Λ_ℓ = λ_0 + ... + λ_ℓ the conversions read τ_ℓ = 1/Λ_{ℓ-1},
λ_0 = 1/τ_1, λ_ℓ = 1/τ_{ℓ+1} - 1/τ_ℓ, c_ℓ = τ_ℓ - τ_{ℓ+1} (τ_{N+1} = 0) and
w_ℓ = λ_ℓ/(Λ_{ℓ-1} Λ_ℓ) for ℓ < N, w_N = 1. c_0 multiplies the entropy of
the root class, which is always 0; it is kept at 0.
"""
import numpy as np
from .common import InvalidProfile

PROFILE_TOL = 1e-12

def _as_profile(values, name):
    try:
        values = np.array(values, dtype=float).reshape(-1)
    except (TypeError, ValueError):
        raise InvalidProfile("Malformed {} '{}'.".format(name, values))

    if not len(values):
        raise InvalidProfile("Empty {}.".format(name))

    if not np.all(np.isfinite(values)):
        raise InvalidProfile("Non-finite {} '{}'.".format(name, values))

    return values

class RateProfile:
    """
    Intra-level revision rates λ_0..λ_{N-1}: nonnegative, summing to one and
    with λ_0 > 0.
    """
    def __init__(self, rates):
        rates = _as_profile(rates, "rates")

        if np.any(rates < 0):
            raise InvalidProfile("Rates must be nonnegative, got '{}'.".format(rates))

        if abs(rates.sum() - 1.0) > PROFILE_TOL * len(rates):
            raise InvalidProfile("Rates must sum to 1, got sum '{}'.".format(rates.sum()))

        if not rates[0] > 0:
            raise InvalidProfile("The root-level rate must be positive, got '{}'.".format(rates))

        self.rates = rates
        self.rates.setflags(write=False)

    @property
    def depth(self):
        return len(self.rates)

    @property
    def cumulative(self):
        """Λ_ℓ = λ_0 + ... + λ_ℓ."""
        return np.cumsum(self.rates)

    def cumulative_at(self, level):
        return float(self.cumulative[level])

    def to_temps(self):
        return TempProfile(rates_to_temps(self.rates))

    def to_weights(self):
        temps = rates_to_temps(self.rates)
        return WeightProfile(rates_to_nkl_weights(self.rates),
                             temps_to_entropy_weights(temps))

    @classmethod
    def plain(cls, depth=1):
        """The rates under which nesting has no effect: λ_0 = 1."""
        rates = np.zeros(depth)
        rates[0] = 1.0
        return cls(rates)

    def __len__(self):
        return self.depth

    def __str__(self):
        return "<RateProfile {}>".format(self.rates.tolist())

    def __repr__(self):
        return str(self)

class ExtrinsicProfile:
    """Coefficients η_0..η_{N-1} of the extrinsic imitation model."""
    def __init__(self, etas):
        etas = _as_profile(etas, "coefficients")

        if np.any(etas < 0) or not np.any(etas > 0):
            raise InvalidProfile("Coefficients must be nonnegative and not all zero, got '{}'.".format(etas))

        self.etas = etas
        self.etas.setflags(write=False)

    @property
    def depth(self):
        return len(self.etas)

    def __len__(self):
        return self.depth

class TempProfile:
    """
    Level temperatures τ_1 >= ... >= τ_N > 0.
    """
    def __init__(self, temps):
        temps = _as_profile(temps, "temperatures")

        if np.any(temps <= 0):
            raise InvalidProfile("Temperatures must be positive, got '{}'.".format(temps))

        if np.any(np.diff(temps) > PROFILE_TOL * temps[:-1]):
            raise InvalidProfile("Temperatures must be nonincreasing, got '{}'.".format(temps))

        self.temps = temps
        self.temps.setflags(write=False)

    @property
    def depth(self):
        return len(self.temps)

    def at(self, level):
        """τ_ℓ for ℓ in 1..N."""
        return float(self.temps[level - 1])

    @property
    def time_scale(self):
        """
        The factor by which the exponential weights run faster than the
        nested replicator dynamics with the normalized rates, 1/τ_N.
        """
        return 1.0 / self.temps[-1]

    def to_rates(self):
        """
        The normalized rates of the equivalent nested replicator dynamics.
        The two orbits coincide up to the time_scale factor.
        """
        return RateProfile(temps_to_rates(self.temps) * self.temps[-1])

    def entropy_weights(self):
        return temps_to_entropy_weights(self.temps)

    def to_weights(self):
        return WeightProfile(self.to_rates().to_weights().nkl_weights,
                             self.entropy_weights())

    def __len__(self):
        return self.depth

    def __str__(self):
        return "<TempProfile {}>".format(self.temps.tolist())

    def __repr__(self):
        return str(self)

class WeightProfile:
    """
    The nested KL weights w_1..w_N and the nested entropy weights c_0..c_N.
    """
    def __init__(self, nkl_weights, entropy_weights):
        w = _as_profile(nkl_weights, "nkl weights")
        c = _as_profile(entropy_weights, "entropy weights")

        if len(c) != len(w) + 1:
            raise InvalidProfile("Expected {} entropy weights, got '{}'.".format(len(w) + 1, c))

        if np.any(w < -PROFILE_TOL) or np.any(c[1:] < -PROFILE_TOL):
            raise InvalidProfile("Weights must be nonnegative: '{}', '{}'.".format(w, c))

        if not c[-1] > 0:
            raise InvalidProfile("The finest entropy weight must be positive, got '{}'.".format(c))

        self.nkl_weights = np.maximum(w, 0)
        self.entropy_weights = c.copy()
        self.entropy_weights[0] = 0.0
        self.entropy_weights[1:] = np.maximum(c[1:], 0)

    @property
    def depth(self):
        return len(self.nkl_weights)

def rates_to_temps(rates):
    return 1.0 / np.cumsum(np.asarray(rates, dtype=float))

def temps_to_rates(temps):
    """
    λ_0 = 1/τ_1 and λ_ℓ = 1/τ_{ℓ+1} - 1/τ_ℓ. The result sums to 1/τ_N.
    """
    inverse = 1.0 / np.asarray(temps, dtype=float)
    return np.diff(inverse, prepend=0.0)

def temps_to_entropy_weights(temps):
    """c_0 = 0, c_ℓ = τ_ℓ - τ_{ℓ+1} for ℓ = 1..N with τ_{N+1} = 0."""
    temps = np.asarray(temps, dtype=float)
    return np.concatenate([[0.0], temps - np.append(temps[1:], 0.0)])

def entropy_weights_to_temps(entropy_weights):
    """τ_ℓ = c_ℓ + ... + c_N for ℓ = 1..N."""
    c = np.asarray(entropy_weights, dtype=float)[1:]
    return np.cumsum(c[::-1])[::-1]

def entropy_weights_to_rates(entropy_weights):
    """
    λ_0 = 1/S_1 and λ_ℓ = c_ℓ/(S_ℓ S_{ℓ+1}) for ℓ = 1..N-1, where
    S_ℓ = c_ℓ + ... + c_N. The result sums to 1/τ_N.
    """
    c = np.asarray(entropy_weights, dtype=float)
    tails = entropy_weights_to_temps(c)
    rates = np.empty(len(tails))
    rates[0] = 1.0 / tails[0]
    rates[1:] = c[1:-1] / (tails[:-1] * tails[1:])
    return rates

def rates_to_nkl_weights(rates):
    rates = np.asarray(rates, dtype=float)
    cumulative = np.cumsum(rates)
    w = np.ones(len(rates))
    w[:-1] = rates[1:] / (cumulative[:-1] * cumulative[1:])
    return w

def convert(rates=None, temps=None):
    """
    Converts a rate or temperature profile into all equivalent profiles.
    Exactly one source must be given.

    Returns a dict with the keys "rates", "temps", "nkl_weights",
    "entropy_weights" and "time_scale".
    """
    if (rates is None) == (temps is None):
        raise InvalidProfile("Exactly one of rates and temperatures must be given.")

    if rates is not None:
        rate_profile = rates if isinstance(rates, RateProfile) else RateProfile(rates)
        temp_profile = rate_profile.to_temps()
    else:
        temp_profile = temps if isinstance(temps, TempProfile) else TempProfile(temps)
        rate_profile = temp_profile.to_rates()

    weights = rate_profile.to_weights()
    entropy = temp_profile.entropy_weights()

    return {
        "rates": rate_profile.rates.tolist(),
        "temps": temp_profile.temps.tolist(),
        "nkl_weights": weights.nkl_weights.tolist(),
        "entropy_weights": entropy.tolist(),
        "time_scale": float(temp_profile.time_scale)
    }

def round_trip_error(rates):
    """
    Returns the largest deviation over the conversion identities: rates to
    temperatures and back, the NKL weights against the entropy weights,
    and entropy weights back to rates.
    """
    rates = np.asarray(rates, dtype=float)
    temps = rates_to_temps(rates)
    c = temps_to_entropy_weights(temps)
    w = rates_to_nkl_weights(rates)

    return float(max(
        np.abs(temps_to_rates(temps) - rates).max(),
        np.abs(entropy_weights_to_temps(c) - temps).max() / temps[0],
        np.abs(w - c[1:]).max() / temps[0],
        np.abs(entropy_weights_to_rates(c) - rates).max()
    ))
