"""
Replicator-type vector fields on the simplex.

The plain replicator field accepts any population state. The nested fields
average payoffs within classes and therefore need strictly interior states;
they raise BoundaryState as soon as some action (and hence some class) has
zero mass.
"""
import functools
import numpy as np
from ..common import BoundaryState, InvalidProfile
from ..games import class_mean_payoffs
from ..profiles import RateProfile, ExtrinsicProfile

STATE_TOL = 1e-9

def check_state(x, n):
    x = np.asarray(x, dtype=float)

    if x.shape != (n,):
        raise BoundaryState("Expected a state with {} entries, got shape '{}'.".format(n, x.shape))

    if not np.all(np.isfinite(x)) or np.any(x < 0):
        raise BoundaryState("State has negative or non-finite entries: '{}'.".format(x))

    if abs(x.sum() - 1.0) > STATE_TOL:
        raise BoundaryState("State does not lie on the simplex (sum '{}').".format(x.sum()))

    return x

def check_interior(x, n):
    x = check_state(x, n)

    if np.any(x <= 0):
        raise BoundaryState("Nested dynamics need an interior state; action(s) '{}' have zero mass.".format(
            np.flatnonzero(x <= 0)))

    return x

def as_rates(rates, tree):
    if not isinstance(rates, RateProfile):
        rates = RateProfile(rates)

    if rates.depth != tree.depth:
        raise InvalidProfile("Expected {} rates for a tree of depth {}, got '{}'.".format(
            tree.depth, tree.depth, rates.rates))

    return rates

def as_etas(etas, tree):
    if not isinstance(etas, ExtrinsicProfile):
        etas = ExtrinsicProfile(etas)

    if etas.depth != tree.depth:
        raise InvalidProfile("Expected {} coefficients for a tree of depth {}, got '{}'.".format(
            tree.depth, tree.depth, etas.etas))

    return etas

def _level_means(game, tree, x, level, F):
    means, masses = class_mean_payoffs(game, tree, x, level, F=F)
    assign = tree.assignment(level)
    return means[assign], masses[assign]

def rd_field(game, x):
    """ẋ_a = x_a [F_a(x) - F̄(x)]."""
    x = check_state(x, game.n)
    F = game.payoff(x)
    return x * (F - x @ F)

def growth_rates(game, tree, rates, x, F=None):
    """
    The per-capita growth rates of the nested replicator dynamics,
    F_a(x) - Σ_k λ_k F̂_{K_k(a)}(x).
    """
    x = check_interior(x, game.n)
    rates = as_rates(rates, tree)

    if F is None:
        F = game.payoff(x)

    growth = np.zeros(game.n)

    for level, rate in enumerate(rates.rates):
        if rate == 0:
            continue
        means, _ = _level_means(game, tree, x, level, F)
        growth += rate * (F - means)

    return growth

def nrd_field(game, tree, rates, x):
    """ẋ_a = x_a Σ_k λ_k [F_a(x) - F̂_{K_k(a)}(x)]."""
    x = check_interior(x, game.n)
    return x * growth_rates(game, tree, rates, x)

def nrd_extr_field(game, tree, etas, x):
    """ẋ_a = x_a Σ_k η_k x_{K_k(a)} [F_a(x) - F̂_{K_k(a)}(x)]."""
    x = check_interior(x, game.n)
    etas = as_etas(etas, tree)
    F = game.payoff(x)
    growth = np.zeros(game.n)

    for level, eta in enumerate(etas.etas):
        if eta == 0:
            continue
        means, masses = _level_means(game, tree, x, level, F)
        growth += eta * masses * (F - means)

    return x * growth

def class_field(game, tree, rates, x, level):
    """
    The aggregate velocity of every class at a level, evaluated with the
    class dynamics ẋ_K = x_K Σ_{k<ℓ} λ_k [F̂_K(x) - F̂_{K_k(K)}(x)].
    """
    x = check_interior(x, game.n)
    rates = as_rates(rates, tree)
    F = game.payoff(x)
    means, masses = class_mean_payoffs(game, tree, x, level, F=F)
    representatives = np.array([tree.class_members(c)[0] for c in tree.classes(level)])
    velocity = np.zeros(len(masses))

    for k in range(level):
        coarse, _ = class_mean_payoffs(game, tree, x, k, F=F)
        coarse = coarse[tree.assignment(k)[representatives]]
        velocity += rates.rates[k] * (means - coarse)

    return masses * velocity

def make_field(kind, game, tree=None, profile=None):
    """
    Returns the vector field x -> ẋ of the given kind as a callable.

    Arguments:
        - kind: "rd", "nrd" or "nrd_extr".
        - profile: The RateProfile ("nrd") or ExtrinsicProfile ("nrd_extr").
    """
    if kind == "rd":
        return functools.partial(rd_field, game)
    elif kind == "nrd":
        return functools.partial(nrd_field, game, tree, as_rates(profile, tree))
    elif kind == "nrd_extr":
        return functools.partial(nrd_extr_field, game, tree, as_etas(profile, tree))
    else:
        raise ValueError("Unknown field kind '{}'.".format(kind))
