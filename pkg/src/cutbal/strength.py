"""Exact edge strengths on the undirected view via recursive global min cut.

The strength of an edge is the largest k such that some vertex-induced
subgraph containing it is k-edge-connected (weighted, orientation dropped).
The recursion computes it exactly: take a component's global min cut, floor
every edge of the component at that value, split along the cut and recurse.
Edges crossing a split keep the floor; edges inside a side can only gain.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._util import connected_components
from .graph import CutSet


@dataclass(frozen=True)
class StrengthMap:
    """Per-edge strength values; ``exact`` marks a full (non-estimate) map."""

    values: np.ndarray
    exact: bool = True

    def __post_init__(self):
        self.values.setflags(write=False)


def _undirected_adjacency(g):
    """Symmetric weight matrix of the undirected view (parallel edges summed)."""
    adj = np.zeros((g.n, g.n))
    np.add.at(adj, (g.tails, g.heads), g.weights)
    np.add.at(adj, (g.heads, g.tails), g.weights)
    return adj


def _stoer_wagner(adj, labels):
    """Deterministic minimum-cut phase loop on a dense adjacency matrix.

    ``labels[i]`` holds the original vertex ids merged into local vertex i.
    Returns (cut value, tuple of original ids on one side).  Ties resolve to
    the earliest phase and the smallest vertex index, so results are
    reproducible.
    """
    n = adj.shape[0]
    w = adj.copy()
    groups = [list(lbl) for lbl in labels]
    alive = np.ones(n, dtype=bool)
    best_value = math.inf
    best_side = None
    for _ in range(n - 1):
        act = np.flatnonzero(alive)
        a0 = int(act[0])
        conn = w[a0].copy()
        conn[~alive] = -math.inf
        conn[a0] = -math.inf
        s = a0
        t = a0
        for _ in range(len(act) - 1):
            nxt = int(np.argmax(conn))  # first max = smallest id on ties
            s, t = t, nxt
            conn += w[nxt]
            conn[nxt] = -math.inf
        phase_value = float(w[t, alive].sum())
        if phase_value < best_value:
            best_value = phase_value
            best_side = tuple(sorted(groups[t]))
        # merge t into s
        w[s, :] += w[t, :]
        w[:, s] += w[:, t]
        w[s, s] = 0.0
        w[t, :] = 0.0
        w[:, t] = 0.0
        groups[s].extend(groups[t])
        alive[t] = False
    return float(best_value), best_side


def global_min_cut(g):
    """Exact minimum weighted cut of the undirected view of ``g``.

    Returns (value, side).  On a disconnected graph the value is 0 and the
    side is one connected component.
    """
    if g.n < 2:
        raise ValueError("global min cut needs at least 2 vertices")
    comps = connected_components(g.n, g.tails, g.heads, vertices=range(g.n))
    if len(comps) > 1:
        return 0.0, CutSet(comps[0].tolist(), g.n)
    adj = _undirected_adjacency(g)
    value, side = _stoer_wagner(adj, [[v] for v in range(g.n)])
    return value, CutSet(side, g.n)


def compute_strengths(g, record=None):
    """Exact strengths for every edge of ``g`` over its undirected view.

    ``record``, when given, collects the vertex set of every nontrivial
    component the recursion visits (they form a laminar family).
    """
    strengths = np.zeros(g.m)
    if g.m == 0:
        return StrengthMap(strengths, exact=True)
    adj_full = _undirected_adjacency(g)
    edge_sets = {}
    for e in range(g.m):
        a, b = int(g.tails[e]), int(g.heads[e])
        edge_sets.setdefault((min(a, b), max(a, b)), []).append(e)

    stack = [(tuple(range(g.n)), 0.0)]
    while stack:
        verts, floor = stack.pop()
        if len(verts) < 2:
            continue
        vlist = list(verts)
        sub_t = []
        sub_h = []
        present = set(vlist)
        for (a, b), ids in edge_sets.items():
            if a in present and b in present:
                sub_t.append(a)
                sub_h.append(b)
        for comp in connected_components(g.n, np.array(sub_t, dtype=np.int64),
                                         np.array(sub_h, dtype=np.int64),
                                         vertices=vlist):
            comp = [int(v) for v in comp]
            if len(comp) < 2:
                continue
            adj = adj_full[np.ix_(comp, comp)]
            value, side = _stoer_wagner(adj, [[v] for v in comp])
            level = max(floor, value)
            comp_set = set(comp)
            if record is not None:
                record.append(frozenset(comp_set))
            for (a, b), ids in edge_sets.items():
                if a in comp_set and b in comp_set:
                    for e in ids:
                        strengths[e] = level
            side_set = set(side)
            rest = tuple(sorted(comp_set - side_set))
            stack.append((tuple(sorted(side_set)), level))
            stack.append((rest, level))
    return StrengthMap(strengths, exact=True)


def decomposition_components(g):
    """Nontrivial component vertex sets visited by the strength recursion."""
    record = []
    compute_strengths(g, record=record)
    return record


def strength_sum_check(g, sm):
    """Sum of weight/strength over all edges; at most n-1 for exact maps."""
    if sm.values.shape[0] != g.m:
        raise ValueError("strength map does not cover the graph's edges")
    total = 0.0
    for e in range(g.m):
        u = float(g.weights[e])
        k = float(sm.values[e])
        if u == 0.0:
            continue
        if k <= 0.0:
            raise ValueError(f"edge {e} has positive weight but strength {k}")
        total += u / k
    return total
