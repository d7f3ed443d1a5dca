"""
Revision protocols and the mean dynamics they induce.

Switch rates are returned as an n x n matrix ρ whose entry (a, b) is the rate
at which an a-strategist switches to b. The nested protocols sample within
classes and need interior states (BoundaryState otherwise). Plain imitation
accepts boundary states; its rows for unused actions (x_a = 0) are 0.
"""
import numpy as np
from .fields import check_interior, as_rates, as_etas

def _excess(payoffs):
    payoffs = np.asarray(payoffs, dtype=float)
    return np.maximum(payoffs[None, :] - payoffs[:, None], 0.0)

def _conditional_shares(tree, level, x):
    """The matrix of x_{b|K_ℓ(a)}: b's share within a's level-ℓ class."""
    assign = tree.assignment(level)
    masses = tree.class_masses(x, level)[assign]
    same = assign[:, None] == assign[None, :]
    return np.where(same, x[None, :] / masses[:, None], 0.0)

def _mask_unused(rho, x):
    rho[x == 0, :] = 0.0
    return rho

def ppi_switch_rates(payoffs, x):
    """Pairwise proportional imitation: ρ_ab = x_b [π_b - π_a]_+."""
    x = np.asarray(x, dtype=float)
    return _mask_unused(x[None, :] * _excess(payoffs), x)

def nppi_switch_rates(tree, rates, payoffs, x):
    """
    Nested pairwise proportional imitation:
    ρ_ab = Σ_k λ_k x_{b|K_k(a)} [π_b - π_a]_+.
    """
    x = check_interior(x, tree.n)
    rates = as_rates(rates, tree)
    meet = np.zeros((tree.n, tree.n))

    for level, rate in enumerate(rates.rates):
        if rate > 0:
            meet += rate * _conditional_shares(tree, level, x)

    return meet * _excess(payoffs)

def imitation_rates(tree, rates, payoffs, x):
    """
    The conditional imitation rates ρ_ab / x_b of the nested protocol,
    [π_b - π_a]_+ Σ_{k <= deg(a,b)} λ_k / x_{K_k(a)}.
    """
    x = check_interior(x, tree.n)
    rates = as_rates(rates, tree)
    weight = np.zeros((tree.n, tree.n))

    for level, rate in enumerate(rates.rates):
        assign = tree.assignment(level)
        masses = tree.class_masses(x, level)[assign]
        same = assign[:, None] == assign[None, :]
        weight += np.where(same, rate / masses[:, None], 0.0)

    return weight * _excess(payoffs)

def extrinsic_switch_rates(tree, etas, payoffs, x):
    """
    The extrinsic imitation protocol ρ_ab = E_ab x_b [π_b - π_a]_+ with
    E_ab = Σ_{k <= deg(a,b)} η_k.
    """
    x = check_interior(x, tree.n)
    etas = as_etas(etas, tree)
    coefficients = np.zeros((tree.n, tree.n))

    for level, eta in enumerate(etas.etas):
        assign = tree.assignment(level)
        coefficients += eta * (assign[:, None] == assign[None, :])

    return coefficients * x[None, :] * _excess(payoffs)

def mean_dynamics(rho, x):
    """
    The mean dynamics of a protocol: inflow into a minus outflow from a,
    ẋ_a = Σ_b x_b ρ_ba - x_a Σ_b ρ_ab.
    """
    rho = np.asarray(rho, dtype=float)
    x = np.asarray(x, dtype=float)
    return x @ rho - x * rho.sum(axis=1)
