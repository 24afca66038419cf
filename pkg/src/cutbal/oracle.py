"""Brute-force ground truth for small instances.

Every function here enumerates exhaustively (cuts, vertex subsets, or
augmenting paths) and fails loudly via :class:`BudgetError` beyond its hard
instance cap.  These oracles gate the randomized algorithms elsewhere in the
package; they are deliberately simple and never approximate.
"""

import math

import numpy as np

from . import kernels
from ._util import popcount, proper_masks
from .errors import BudgetError
from .graph import CutSet

MAX_ENUM_N = 26
MAX_STRENGTH_N = 10
MAX_ST_ENUM_N = 20


def _check_enum_budget(n, cap=MAX_ENUM_N):
    if n > cap:
        raise BudgetError(f"exhaustive enumeration capped at {cap} vertices, got {n}")


def enumerate_cuts(n):
    """Yield every proper nonempty vertex subset once, up to complement.

    The representative of each pair contains vertex 0; subsets are emitted in
    ascending bitmask order (2^(n-1) - 1 total).
    """
    _check_enum_budget(n)
    if n < 2:
        return
    for block in proper_masks(n):
        for mask in block:
            yield CutSet.from_mask(int(mask), n)


def _balance_vectors(out_w, in_w):
    """Per-cut balance with the zero conventions (0/0 -> 1, x/0 -> inf)."""
    bal = np.ones(out_w.shape[0])
    both = (out_w > 0) & (in_w > 0)
    bal[both] = np.maximum(out_w[both] / in_w[both], in_w[both] / out_w[both])
    one_sided = (out_w > 0) != (in_w > 0)
    bal[one_sided] = math.inf
    return bal


def exact_graph_balance(g):
    """Max cut balance over every proper nonempty cut; inf when some cut is
    crossed in only one direction (e.g. not strongly connected)."""
    _check_enum_budget(g.n)
    if g.n < 2:
        raise ValueError("graph balance needs at least 2 vertices")
    best = 1.0
    for masks in proper_masks(g.n):
        out_w, in_w = kernels.cut_weights(g.tails, g.heads, g.weights, masks)
        best = max(best, float(_balance_vectors(out_w, in_w).max()))
    return best


def exact_conductance(g):
    """Minimum conductance of the undirected view of a connected component.

    Each directed edge contributes its weight to both endpoints' volumes and
    crossing weight counts both directions.
    """
    _check_enum_budget(g.n)
    if g.m == 0:
        raise ValueError("conductance is undefined for an edgeless component")
    if g.n < 2:
        raise ValueError("conductance needs at least 2 vertices")
    deg = np.zeros(g.n)
    np.add.at(deg, g.tails, g.weights)
    np.add.at(deg, g.heads, g.weights)
    total = float(deg.sum())
    best = math.inf
    for masks in proper_masks(g.n):
        out_w, in_w = kernels.cut_weights(g.tails, g.heads, g.weights, masks)
        cross = out_w + in_w
        vol = kernels.mask_sums(deg, masks)
        small = np.minimum(vol, total - vol)
        ok = small > 0
        if ok.any():
            best = min(best, float((cross[ok] / small[ok]).min()))
    return best


def find_sparse_cut_exact(view, lam, vertices=None):
    """Exhaustively search a component for a cut with crossing edge count
    (both directions) at most ``lam`` times the smaller side.

    Returns the density minimizer (lexicographically-least bitmask on ties)
    or None when no such cut exists.  ``view`` may be a DiGraph or a
    WeightClassView; ``vertices`` defaults to the vertices touched by edges.
    """
    g = getattr(view, "graph", view)
    tails = np.asarray(view.tails, dtype=np.int64)
    heads = np.asarray(view.heads, dtype=np.int64)
    if vertices is None:
        vertices = sorted(set(tails.tolist()) | set(heads.tolist()))
    vertices = [int(v) for v in vertices]
    c = len(vertices)
    _check_enum_budget(c)
    if c < 2:
        return None
    local = {v: i for i, v in enumerate(vertices)}
    lt = np.array([local[int(t)] for t in tails], dtype=np.int64)
    lh = np.array([local[int(h)] for h in heads], dtype=np.int64)
    full = np.uint64((1 << c) - 1)
    best = None  # (density, canonical mask, crossing count, smaller side)
    for masks in proper_masks(c):
        out_c, in_c = kernels.cut_counts(lt, lh, masks)
        cross = out_c + in_c
        pop = popcount(masks)
        small = np.minimum(pop, c - pop)
        density = cross / small
        # ties select the lexicographically-least of the two complement forms
        canon = np.minimum(masks, full ^ masks)
        i = int(np.lexsort((canon, density))[0])
        candidate = (float(density[i]), int(canon[i]), int(cross[i]), int(small[i]))
        if best is None or candidate[:2] < best[:2]:
            best = candidate
    if best is None or best[2] > lam * best[3]:
        return None
    members = [vertices[i] for i in range(c) if (best[1] >> i) & 1]
    return CutSet(members, g.n)


def _undirected_min_cut_enum(tails, heads, weights, c):
    """Min undirected crossing weight over proper bipartitions of c local
    vertices; 0 when disconnected."""
    if c < 2:
        return 0.0
    best = math.inf
    for masks in proper_masks(c):
        out_w, in_w = kernels.cut_weights(tails, heads, weights, masks)
        best = min(best, float((out_w + in_w).min()))
    return best


def brute_strength(g, e):
    """Edge strength by definition: max over vertex-induced subgraphs
    containing both endpoints of the weighted edge connectivity (undirected
    view)."""
    if g.n > MAX_STRENGTH_N:
        raise BudgetError(f"brute strength capped at {MAX_STRENGTH_N} vertices, got {g.n}")
    a, b = int(g.tails[e]), int(g.heads[e])
    others = [v for v in range(g.n) if v not in (a, b)]
    best = 0.0
    for sub in range(1 << len(others)):
        w_set = {a, b} | {others[i] for i in range(len(others)) if (sub >> i) & 1}
        verts = sorted(w_set)
        local = {v: i for i, v in enumerate(verts)}
        keep = np.array([t in w_set and h in w_set
                         for t, h in zip(g.tails, g.heads)], dtype=bool)
        lt = np.array([local[int(t)] for t in g.tails[keep]], dtype=np.int64)
        lh = np.array([local[int(h)] for h in g.heads[keep]], dtype=np.int64)
        lw = g.weights[keep]
        best = max(best, _undirected_min_cut_enum(lt, lh, lw, len(verts)))
    return best


def exact_max_flow(g, s, t):
    """Max flow via shortest augmenting paths; returns (value, per-edge flow).

    Parallel edges keep individual flows.  Exact for integer-valued
    capacities; a tiny residual tolerance guards float dust otherwise.
    """
    s, t = int(s), int(t)
    if s == t:
        raise ValueError("source and sink must differ")
    if not (0 <= s < g.n and 0 <= t < g.n):
        raise ValueError("source/sink outside vertex range")
    m = g.m
    cap = np.zeros(2 * m)
    cap[0::2] = g.weights
    flow = np.zeros(2 * m)
    adj = [[] for _ in range(g.n)]
    arc_to = np.zeros(2 * m, dtype=np.int64)
    for e in range(m):
        a, b = int(g.tails[e]), int(g.heads[e])
        adj[a].append(2 * e)
        arc_to[2 * e] = b
        adj[b].append(2 * e + 1)
        arc_to[2 * e + 1] = a
    tol = 1e-12
    value = 0.0
    while True:
        parent_arc = np.full(g.n, -1, dtype=np.int64)
        parent_arc[s] = -2
        queue = [s]
        qi = 0
        while qi < len(queue) and parent_arc[t] == -1:
            v = queue[qi]
            qi += 1
            for a in adj[v]:
                w = int(arc_to[a])
                if parent_arc[w] == -1 and cap[a] - flow[a] > tol:
                    parent_arc[w] = a
                    queue.append(w)
        if parent_arc[t] == -1:
            break
        path = []
        v = t
        while v != s:
            a = int(parent_arc[v])
            path.append(a)
            v = int(arc_to[a ^ 1])
        bottleneck = min(cap[a] - flow[a] for a in path)
        for a in path:
            flow[a] += bottleneck
            flow[a ^ 1] -= bottleneck
        value += bottleneck
    return float(value), flow[0::2].copy()


def _st_masks(n, s, t, chunk=1 << 18):
    """Bitmasks of all S with s in S and t not in S."""
    others = [v for v in range(n) if v not in (s, t)]
    k = len(others)
    total = 1 << k
    start = 0
    while start < total:
        stop = min(start + chunk, total)
        js = np.arange(start, stop, dtype=np.uint64)
        masks = np.full(js.shape, 1 << s, dtype=np.uint64)
        for i, p in enumerate(others):
            masks |= ((js >> np.uint64(i)) & np.uint64(1)) << np.uint64(p)
        yield masks
        start = stop


def exact_min_st_cut(g, s, t):
    """Minimum directed s-t cut value by enumeration (budget n <= 20)."""
    if g.n > MAX_ST_ENUM_N:
        raise BudgetError(f"s-t cut enumeration capped at {MAX_ST_ENUM_N} vertices")
    if s == t:
        raise ValueError("source and sink must differ")
    best = math.inf
    best_mask = None
    for masks in _st_masks(g.n, int(s), int(t)):
        out_w, _ = kernels.cut_weights(g.tails, g.heads, g.weights, masks)
        i = int(np.argmin(out_w))
        if out_w[i] < best:
            best = float(out_w[i])
            best_mask = int(masks[i])
    return best, CutSet.from_mask(best_mask, g.n)


def verify_for_all(g, h, eps):
    """Check the for-all sparsifier condition on every cut in both directions.

    Returns (ok, worst cut, worst ratio) where the worst cut maximizes the
    relative cut-weight error and the ratio reported is w_H / w_G there.
    """
    if g.n != h.n:
        raise ValueError("graphs must share a vertex set")
    _check_enum_budget(g.n)
    ok = True
    worst_err = -1.0
    worst_mask = None
    worst_ratio = 1.0
    worst_dir = "out"
    for masks in proper_masks(g.n):
        g_out, g_in = kernels.cut_weights(g.tails, g.heads, g.weights, masks)
        h_out, h_in = kernels.cut_weights(h.tails, h.heads, h.weights, masks)
        for direction, gv, hv in (("out", g_out, h_out), ("in", g_in, h_in)):
            with np.errstate(divide="ignore", invalid="ignore"):
                err = np.abs(hv - gv) / gv
            err[(gv == 0) & (hv == 0)] = 0.0
            err[(gv == 0) & (hv > 0)] = math.inf
            i = int(np.argmax(err))
            if err[i] > worst_err:
                worst_err = float(err[i])
                worst_mask = int(masks[i])
                worst_dir = direction
                worst_ratio = float(hv[i] / gv[i]) if gv[i] > 0 else (
                    math.inf if hv[i] > 0 else 1.0)
            if err[i] > eps + 1e-12:
                ok = False
    worst_cut = None if worst_mask is None else CutSet.from_mask(worst_mask, g.n)
    if worst_dir == "in" and worst_cut is not None:
        worst_cut = worst_cut.complement()
    return ok, worst_cut, worst_ratio
