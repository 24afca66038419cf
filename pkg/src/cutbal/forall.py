"""Strength-based importance sampling with a balance boost.

Every edge survives independently with probability min(1, rho * u_e / k_e)
where rho grows linearly in (beta + 1); survivors are reweighted to u_e / p_e
so every directed cut value is preserved in expectation.  Cuts whose own
balance is alpha suffer relative error about eps * sqrt((alpha+1)/(beta+1)),
so boosting by beta buys accuracy exactly on the cuts that are at most
beta-balanced.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._util import TAG_SPARSIFY, rng_stream
from .graph import DiGraph
from .strength import compute_strengths


@dataclass(frozen=True)
class SparsifierResult:
    h: DiGraph
    rho: float
    beta: float
    eps: float
    d: float
    seed: int
    expected_edges: float
    kept_edges: int


def _check_params(beta, eps, d):
    if beta < 1:
        raise ValueError("beta must be >= 1")
    if not (0 < eps < 1):
        raise ValueError("eps must lie in (0, 1)")
    if d <= 2:
        raise ValueError("d must exceed 2")


def sampling_rate(n, beta, eps, d):
    """The per-strength-unit sampling rate rho = 3 d (beta+1) ln(n) / eps^2."""
    return 3.0 * d * (beta + 1.0) * math.log(n) / (eps * eps)


def keep_probabilities(g, sm, beta, eps, d):
    """Per-edge keep probabilities min(1, rho * u_e / k_e); zero-weight edges
    are never kept (they contribute nothing to any cut)."""
    rho = sampling_rate(g.n, beta, eps, d)
    p = np.zeros(g.m)
    pos = g.weights > 0
    p[pos] = np.minimum(1.0, rho * g.weights[pos] / sm.values[pos])
    return rho, p


def sample_with_strengths(g, sm, beta, eps, d=3.0, seed=0):
    """Run the sampling step against a precomputed strength map."""
    _check_params(beta, eps, d)
    if g.n < 2:
        raise ValueError("sparsification needs at least 2 vertices")
    rho, p = keep_probabilities(g, sm, beta, eps, d)
    draws = rng_stream(seed, TAG_SPARSIFY).random(g.m)
    keep = draws < p
    with np.errstate(divide="ignore", invalid="ignore"):
        new_w = np.where(keep, g.weights / p, 0.0)
    h = DiGraph.from_arrays(g.n, g.tails[keep], g.heads[keep], new_w[keep])
    return SparsifierResult(h=h, rho=rho, beta=float(beta), eps=float(eps),
                            d=float(d), seed=int(seed),
                            expected_edges=float(p.sum()),
                            kept_edges=int(keep.sum()))


def sparsify(g, beta, eps, d=3.0, seed=0):
    """Compute strengths, then sample; deterministic given the seed."""
    _check_params(beta, eps, d)
    sm = compute_strengths(g)
    return sample_with_strengths(g, sm, beta, eps, d=d, seed=seed)


def guaranteed_tolerance(alpha, beta, eps):
    """Relative error bound for an alpha-balanced cut under a beta boost."""
    if alpha < 1 or beta < 1:
        raise ValueError("alpha and beta must be >= 1")
    return eps * math.sqrt((alpha + 1.0) / (beta + 1.0))


def expected_edges(g, beta, eps, d=3.0, sm=None):
    """Expected surviving edge count; at most rho * (n - 1) by the strength
    sum bound."""
    _check_params(beta, eps, d)
    if sm is None:
        sm = compute_strengths(g)
    _, p = keep_probabilities(g, sm, beta, eps, d)
    return float(p.sum())
