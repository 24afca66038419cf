"""Instance generators: balanced random graphs, hard bipartite families for
sketch size bounds, and the connectivity-sampling counterexample.

All generators are deterministic given their seed and reject infeasible
parameter combinations instead of rounding them.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._util import TAG_GEN, rng_stream
from .graph import CutSet, DiGraph, is_strongly_connected
from .oracle import exact_graph_balance, exact_max_flow


def gen_eulerian(n, m, seed=0):
    """Random strongly connected multigraph that is a union of directed
    cycles (unit weights), so weighted in-degree equals out-degree
    everywhere."""
    n, m = int(n), int(m)
    if n < 2:
        raise ValueError("need at least 2 vertices")
    if m < n:
        raise ValueError("need m >= n to cover every vertex with cycles")
    if n == 2 and m % 2:
        raise ValueError("on 2 vertices every cycle has 2 edges, so m must be even")
    rng = rng_stream(seed, TAG_GEN)
    edges = []

    def add_cycle(order):
        for i in range(len(order)):
            edges.append((int(order[i]), int(order[(i + 1) % len(order)]), 1.0))

    if m == n + 1:
        # a length-(n-1) cycle plus a 2-cycle sharing one vertex covers n
        # vertices with n+1 edges; a Hamiltonian base would strand one edge
        outside = int(rng.integers(0, n))
        rest = [v for v in range(n) if v != outside]
        rng.shuffle(rest)
        add_cycle(rest)
        add_cycle([outside, rest[int(rng.integers(0, len(rest)))]])
    else:
        base = np.arange(n)
        rng.shuffle(base)
        add_cycle(base)
        r = m - n
        while r > 0:
            if r == 2:
                length = 2
            elif r == 3:
                length = 3 if n >= 3 else 2
            else:
                length = int(rng.integers(2, min(n, r) + 1))
                if r - length == 1:
                    length = length - 1 if length > 2 else length + 1
            verts = rng.choice(n, size=length, replace=False)
            add_cycle(verts)
            r -= length
    return DiGraph(n, edges)


def gen_matching_family(n, seed=0):
    """Bipartite family member on 2n vertices: a fixed left-to-right perfect
    matching plus independent coin-flip back edges (all unit weight)."""
    n = int(n)
    if n < 8:
        raise ValueError("matching family needs side size >= 8")
    rng = rng_stream(seed, TAG_GEN)
    edges = [(i, n + i, 1.0) for i in range(n)]
    coins = rng.random((n, n)) < 0.5
    for j in range(n):
        for i in range(n):
            if coins[j, i]:
                edges.append((n + j, i, 1.0))
    return DiGraph(2 * n, edges)


def _matching_gadget(k, weight, rng):
    """One chain gadget on 2k local vertices: weighted matching forward,
    coin-flip unit back edges."""
    edges = [(i, k + i, float(weight)) for i in range(k)]
    coins = rng.random((k, k)) < 0.5
    for j in range(k):
        for i in range(k):
            if coins[j, i]:
                edges.append((k + j, i, 1.0))
    return edges


def gen_forall_lb_chain(n, beta, eps, seed=0, max_attempts=500):
    """Chain of bipartite matching gadgets between consecutive clusters.

    Cluster size k = beta/eps must be an integer dividing n with n >= 2k.
    Matching edges carry weight 1/eps, back edges are unit.  Each gadget is
    redrawn (seed-chained) until it is strongly connected, and while the
    gadget is small enough to enumerate, until it is 8*beta-balanced.
    """
    n = int(n)
    if beta < 1 or not (0 < eps <= 1):
        raise ValueError("need beta >= 1 and eps in (0, 1]")
    k_real = beta / eps
    k = round(k_real)
    if abs(k_real - k) > 1e-9:
        raise ValueError(f"beta/eps = {k_real} must be an integer cluster size")
    if n % k or n < 2 * k:
        raise ValueError(f"n = {n} must be a multiple of cluster size {k}, at least 2k")
    t = n // k
    target = 8.0 * beta
    edges = []
    for b in range(t - 1):
        gadget = None
        for attempt in range(max_attempts):
            rng = rng_stream(seed, TAG_GEN, b, attempt)
            local = _matching_gadget(k, 1.0 / eps, rng)
            cand = DiGraph(2 * k, local)
            if not is_strongly_connected(cand):
                continue
            if 2 * k <= 20 and exact_graph_balance(cand) > target:
                continue
            gadget = local
            break
        if gadget is None:
            raise RuntimeError(f"gadget {b}: no {target}-balanced draw in "
                               f"{max_attempts} attempts")
        lo = b * k
        hi = (b + 1) * k
        for a, c, w in gadget:
            src = lo + a if a < k else hi + (a - k)
            dst = lo + c if c < k else hi + (c - k)
            edges.append((src, dst, w))
    return DiGraph(n, edges)


@dataclass(frozen=True)
class DecodeQuery:
    """One decoding cut: the stored bit shifts this cut's exact value by
    exactly bit+1 above its bit-independent base."""

    bit_index: int
    block: int
    u: int
    v: int
    cut: CutSet
    base: float


def foreach_lb_layout(n, beta, eps):
    """Cluster layout (k, t, bit count) for the bit-encoding chain family.

    Uses k = sqrt(beta/eps) when that is an integer dividing n into at least
    two clusters; otherwise the largest divisor of n not exceeding it.
    """
    n = int(n)
    if n < 2:
        raise ValueError("need at least 2 vertices")
    if beta < 1 or not (0 < eps <= 1):
        raise ValueError("need beta >= 1 and eps in (0, 1]")
    k_target = math.sqrt(beta / eps)
    k_round = round(k_target)
    if abs(k_target - k_round) < 1e-9 and k_round >= 1 \
            and n % k_round == 0 and n // k_round >= 2:
        k = k_round
    else:
        candidates = [d for d in range(1, n // 2 + 1)
                      if n % d == 0 and d <= k_target + 1e-9]
        if not candidates:
            raise ValueError(f"no cluster size <= sqrt(beta/eps) = {k_target:.3f} "
                             f"divides n = {n} into >= 2 clusters")
        k = max(candidates)
    t = n // k
    return k, t, k * k * (t - 1)


def gen_foreach_lb(n, beta, eps, bits=None, seed=0):
    """Bit-encoding chain of complete bipartite blocks with heavy cycles.

    Consecutive clusters are joined by a complete bipartite digraph whose
    edge weights are bit+1 (1 or 2) and by a weight-1/eps cycle that leaves
    each cluster exactly once (cluster order seed-permuted).  Returns the
    graph, one :class:`DecodeQuery` per bit, and the encoded bit array.
    """
    k, t, n_bits = foreach_lb_layout(n, beta, eps)
    rng = rng_stream(seed, TAG_GEN)
    if bits is None:
        bits = (rng.random(n_bits) < 0.5).astype(np.int64)
    else:
        bits = np.asarray(bits, dtype=np.int64)
        if bits.shape[0] != n_bits:
            raise ValueError(f"bit string must have length k^2 (t-1) = {n_bits}")
        if bits.size and (bits.min() < 0 or bits.max() > 1):
            raise ValueError("bits must be 0/1")
    clusters = [list(range(b * k, (b + 1) * k)) for b in range(t)]
    bip_edges = []
    cycle_edges = []
    cycle_w = 1.0 / eps
    for b in range(t - 1):
        for i in range(k):
            for j in range(k):
                bit = bits[b * k * k + i * k + j]
                bip_edges.append((clusters[b][i], clusters[b + 1][j],
                                  float(bit + 1)))
        left = list(clusters[b])
        right = list(clusters[b + 1])
        rng.shuffle(left)
        rng.shuffle(right)
        path = left + right
        for i in range(len(path)):
            cycle_edges.append((path[i], path[(i + 1) % len(path)], cycle_w))
    g = DiGraph(n, bip_edges + cycle_edges)
    cycle_graph = DiGraph(n, cycle_edges)
    queries = []
    for b in range(t - 1):
        later = [v for c in clusters[b + 2:] for v in c]
        for i in range(k):
            for j in range(k):
                u = clusters[b][i]
                v = clusters[b + 1][j]
                members = [u] + [x for x in clusters[b + 1] if x != v] + later
                cut = CutSet(members, n)
                ind = cut.indicator()
                crossing = ind[cycle_graph.tails] & ~ind[cycle_graph.heads]
                base = float(np.add.reduce(
                    np.where(crossing, cycle_graph.weights, 0.0)))
                queries.append(DecodeQuery(bit_index=b * k * k + i * k + j,
                                           block=b, u=u, v=v, cut=cut,
                                           base=base))
    return g, queries, bits


def decode_estimates(queries, estimates):
    """Recover bits from (approximate) cut values: round off the base and
    the constant +1 of the bit encoding, clamped to {0, 1}."""
    out = np.zeros(len(queries), dtype=np.int64)
    for i, (q, est) in enumerate(zip(queries, estimates)):
        out[i] = min(1, max(0, round(est - q.base - 1.0)))
    return out


def gen_skewed_clique(n, skew):
    """Complete bidirected graph with weight ``skew`` from lower to higher id
    and unit weight back.  Its exact balance is ``skew`` (witnessed by any
    singleton), and every dyadic class is a dense tournament, so sketches of
    it keep nontrivial sample universes."""
    n = int(n)
    if n < 3:
        raise ValueError("need at least 3 vertices")
    if skew < 1:
        raise ValueError("skew must be >= 1")
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            edges.append((i, j, float(skew)))
            edges.append((j, i, 1.0))
    return DiGraph(n, edges)


def gen_multiclass(n, n_classes, m_per_class, seed=0):
    """Random digraph with integer weights spread across the first
    ``n_classes`` dyadic classes; used for size benchmarks."""
    n = int(n)
    if n < 2 or n_classes < 1 or n_classes > 53:
        raise ValueError("need n >= 2 and 1 <= n_classes <= 53")
    rng = rng_stream(seed, TAG_GEN)
    edges = []
    for i in range(1, n_classes + 1):
        lo = 1 << (i - 1)
        hi = 1 << i
        for _ in range(int(m_per_class)):
            a, b = rng.integers(0, n, 2)
            while a == b:
                a, b = rng.integers(0, n, 2)
            edges.append((int(a), int(b), float(rng.integers(lo, hi))))
    return DiGraph(n, edges)


def gen_gamma_counterexample(n):
    """Unweighted bipartite digraph: perfect matching left to right, complete
    right to left.  Matching edges have directed connectivity 1 while back
    edges have about n/2, which is what breaks connectivity-proportional
    sampling."""
    n = int(n)
    if n % 2 or n < 8:
        raise ValueError("need even n >= 8")
    k = n // 2
    edges = [(i, k + i, 1.0) for i in range(k)]
    for j in range(k):
        for i in range(k):
            edges.append((k + j, i, 1.0))
    return DiGraph(n, edges)


def edge_connectivities(g):
    """Directed edge connectivity of every edge: max tail-to-head flow."""
    out = np.zeros(g.m)
    for e in range(g.m):
        value, _ = exact_max_flow(g, int(g.tails[e]), int(g.heads[e]))
        out[e] = value
    return out


def connectivity_sample(g, gammas, scale, seed=0):
    """Keep each edge with probability min(1, scale/gamma_e), reweighted to
    weight/probability; the counterexample shows this is not a sparsifier."""
    gammas = np.asarray(gammas, dtype=np.float64)
    if gammas.shape[0] != g.m or np.any(gammas <= 0):
        raise ValueError("need a positive connectivity per edge")
    p = np.minimum(1.0, scale / gammas)
    draws = rng_stream(seed, TAG_GEN).random(g.m)
    keep = draws < p
    new_w = np.where(keep, g.weights / p, 0.0)
    h = DiGraph(g.n, zip(g.tails[keep], g.heads[keep], new_w[keep]))
    return h, p


def gamma_witness_cut(g, h):
    """The refutation cut: v is the right-side vertex with fewest surviving
    out-edges, S is v together with its surviving out-neighborhood."""
    n = g.n
    k = n // 2
    out_deg = np.zeros(n, dtype=np.int64)
    np.add.at(out_deg, h.tails, 1)
    right = np.arange(k, n)
    v = int(right[np.argmin(out_deg[right])])
    neighbors = set(int(x) for x in h.heads[h.tails == v])
    return CutSet({v} | neighbors, n)
