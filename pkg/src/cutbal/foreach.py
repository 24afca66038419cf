"""Sparse-cut peeling cut sketch: build and query.

Per dyadic weight class, cuts whose crossing edge count is at most lambda
times the smaller side are peeled off and stored exactly; what is left is a
set of dense components where each vertex stores its remaining directed
degrees plus ceil(alpha) sampled incident edges per direction.  A query adds
the exact weight of stored edges leaving the cut to a degree-scaled sample
estimate from each dense component, always read off the smaller side of the
component.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import oracle
from ._spectral import multiplicity_adjacency, fiedler_order
from ._util import TAG_SKETCH_IN, TAG_SKETCH_OUT, connected_components, rng_stream
from .graph import CutSet, weight_classes


@dataclass(frozen=True)
class CutEstimate:
    """Recovered cut value split into sampled (i_s) and stored (j_s) parts."""

    total: float
    i_s: float
    j_s: float


@dataclass
class ComponentSkeleton:
    """One dense component with the remaining-edge adjacency kept around so
    fresh samples can be drawn without re-peeling."""

    members: np.ndarray
    deg_out: dict
    deg_in: dict
    out_edges: dict  # vertex -> (heads array, weights array)
    in_edges: dict   # vertex -> (tails array, weights array)


@dataclass
class ClassSkeleton:
    index: int
    sparse_tails: np.ndarray
    sparse_heads: np.ndarray
    sparse_weights: np.ndarray
    components: list
    remaining_tails: np.ndarray = field(repr=False, default=None)
    remaining_heads: np.ndarray = field(repr=False, default=None)
    remaining_weights: np.ndarray = field(repr=False, default=None)


@dataclass
class SketchSkeleton:
    """Deterministic part of a sketch (everything except the samples)."""

    n: int
    beta: float
    eps: float
    alpha: float
    lam: float
    ceil_alpha: int
    mode: str
    classes: list


@dataclass
class ComponentSketch:
    members: np.ndarray
    deg_out: np.ndarray      # aligned with members
    deg_in: np.ndarray
    samples_out: list        # per member: (endpoints, weights) or None
    samples_in: list


@dataclass
class ClassSketch:
    index: int
    sparse_tails: np.ndarray
    sparse_heads: np.ndarray
    sparse_weights: np.ndarray
    components: list


@dataclass
class ForEachSketch:
    n: int
    beta: float
    eps: float
    alpha: float
    lam: float
    ceil_alpha: int
    seed: int
    mode: str
    classes: list


def check_sketch_weights(g):
    if g.m == 0:
        return
    w_min = float(g.weights.min())
    w_max = float(g.weights.max())
    if w_min < 1.0:
        raise ValueError(f"sketching requires weights >= 1, got {w_min}")
    if w_max > float(max(g.n, 2)) ** 10:
        raise ValueError("sketching requires polynomially bounded weights")


def _component_view(tails, heads, members):
    member_set = set(int(v) for v in members)
    keep = np.array([int(t) in member_set for t in tails], dtype=bool)
    return keep


def _crossing_count(tails, heads, in_cut):
    t_in = in_cut[tails]
    h_in = in_cut[heads]
    return int(np.count_nonzero(t_in != h_in))


def find_sparse_cut(view, lam, mode="exact", vertices=None):
    """Find a cut of the component with crossing count <= lam * smaller side.

    Exact mode enumerates and is complete: None means no such cut exists.
    Heuristic mode tries singletons, then the low-degree vertex set, then
    spectral sweep prefixes, and may miss cuts.
    """
    if mode == "exact":
        return oracle.find_sparse_cut_exact(view, lam, vertices=vertices)
    if mode != "heuristic":
        raise ValueError("mode must be 'exact' or 'heuristic'")
    g = getattr(view, "graph", view)
    tails = np.asarray(view.tails, dtype=np.int64)
    heads = np.asarray(view.heads, dtype=np.int64)
    if vertices is None:
        vertices = sorted(set(tails.tolist()) | set(heads.tolist()))
    members = [int(v) for v in vertices]
    c = len(members)
    if c < 2:
        return None
    n = g.n
    deg = np.zeros(n, dtype=np.int64)
    np.add.at(deg, tails, 1)
    np.add.at(deg, heads, 1)
    # singletons
    for v in members:
        if deg[v] <= lam:
            return CutSet([v], n)
    # all low-degree vertices at once
    low = [v for v in members if deg[v] <= lam]
    if 0 < len(low) < c:
        in_cut = np.zeros(n, dtype=bool)
        in_cut[low] = True
        if _crossing_count(tails, heads, in_cut) <= lam * min(len(low), c - len(low)):
            return CutSet(low, n)
    # spectral sweep prefixes
    adj = multiplicity_adjacency(members, tails, heads)
    order = fiedler_order(adj)
    row_deg = adj.sum(axis=1)
    in_prefix = np.zeros(c, dtype=bool)
    cross = 0.0
    for k in range(c - 1):
        v = int(order[k])
        cross += row_deg[v] - 2.0 * adj[v][in_prefix].sum()
        in_prefix[v] = True
        if cross <= lam * min(k + 1, c - k - 1):
            return CutSet([members[i] for i in np.flatnonzero(in_prefix)], n)
    return None


def _peel_class(view, lam, mode):
    """Repeatedly remove sparse cuts from one weight class."""
    n = view.graph.n
    tails = np.asarray(view.tails, dtype=np.int64).copy()
    heads = np.asarray(view.heads, dtype=np.int64).copy()
    weights = np.asarray(view.weights, dtype=np.float64).copy()
    sparse_idx = []
    alive = np.ones(tails.shape[0], dtype=bool)

    class _View:
        graph = view.graph

    while True:
        live_t = tails[alive]
        live_h = heads[alive]
        if live_t.size == 0:
            break
        cut = None
        for comp in connected_components(n, live_t, live_h):
            v = _View()
            keep = _component_view(live_t, live_h, comp)
            v.tails = live_t[keep]
            v.heads = live_h[keep]
            cut = find_sparse_cut(v, lam, mode=mode, vertices=comp.tolist())
            if cut is not None:
                break
        if cut is None:
            break
        in_cut = cut.indicator()
        crossing = alive & (in_cut[tails] != in_cut[heads])
        sparse_idx.extend(np.flatnonzero(crossing).tolist())
        alive &= ~crossing

    sparse_idx = np.array(sorted(sparse_idx), dtype=np.int64)
    return (tails[sparse_idx], heads[sparse_idx], weights[sparse_idx],
            tails[alive], heads[alive], weights[alive])


def _build_components(n, tails, heads, weights):
    comps = []
    for members in connected_components(n, tails, heads):
        member_set = set(int(v) for v in members)
        deg_out = {v: 0 for v in member_set}
        deg_in = {v: 0 for v in member_set}
        out_edges = {v: ([], []) for v in member_set}
        in_edges = {v: ([], []) for v in member_set}
        for t, h, w in zip(tails, heads, weights):
            t, h = int(t), int(h)
            if t in member_set:
                deg_out[t] += 1
                out_edges[t][0].append(h)
                out_edges[t][1].append(float(w))
                deg_in[h] += 1
                in_edges[h][0].append(t)
                in_edges[h][1].append(float(w))
        comps.append(ComponentSkeleton(
            members=members,
            deg_out=deg_out,
            deg_in=deg_in,
            out_edges={v: (np.array(e[0], dtype=np.int64), np.array(e[1]))
                       for v, e in out_edges.items()},
            in_edges={v: (np.array(e[0], dtype=np.int64), np.array(e[1]))
                      for v, e in in_edges.items()},
        ))
    return comps


def build_skeleton(g, beta, eps, mode="exact"):
    """Peel every weight class; returns the deterministic sketch skeleton."""
    if beta < 1:
        raise ValueError("beta must be >= 1")
    if not (0 < eps < 1):
        raise ValueError("eps must lie in (0, 1)")
    if mode not in ("exact", "heuristic"):
        raise ValueError("mode must be 'exact' or 'heuristic'")
    check_sketch_weights(g)
    alpha = lam = math.sqrt(beta) / eps
    classes = []
    for view in weight_classes(g):
        st, sh, sw, rt, rh, rw = _peel_class(view, lam, mode)
        classes.append(ClassSkeleton(
            index=view.index,
            sparse_tails=st, sparse_heads=sh, sparse_weights=sw,
            components=_build_components(g.n, rt, rh, rw),
            remaining_tails=rt, remaining_heads=rh, remaining_weights=rw,
        ))
    return SketchSkeleton(n=g.n, beta=float(beta), eps=float(eps), alpha=alpha,
                          lam=lam, ceil_alpha=int(math.ceil(alpha)), mode=mode,
                          classes=classes)


def sample_skeleton(skel, seed, ceil_alpha=None):
    """Draw the per-vertex samples; streams are keyed by (seed, direction,
    class, vertex) so the result is independent of iteration order."""
    ca = skel.ceil_alpha if ceil_alpha is None else int(ceil_alpha)
    classes = []
    for cls in skel.classes:
        comps = []
        for comp in cls.components:
            members = comp.members
            deg_out = np.array([comp.deg_out[int(v)] for v in members], dtype=np.int64)
            deg_in = np.array([comp.deg_in[int(v)] for v in members], dtype=np.int64)
            samples_out = []
            samples_in = []
            for v in members:
                v = int(v)
                if comp.deg_out[v] > 0:
                    ends, ws = comp.out_edges[v]
                    idx = rng_stream(seed, TAG_SKETCH_OUT, cls.index, v).integers(
                        0, comp.deg_out[v], size=ca)
                    samples_out.append((ends[idx].copy(), ws[idx].copy()))
                else:
                    samples_out.append(None)
                if comp.deg_in[v] > 0:
                    ends, ws = comp.in_edges[v]
                    idx = rng_stream(seed, TAG_SKETCH_IN, cls.index, v).integers(
                        0, comp.deg_in[v], size=ca)
                    samples_in.append((ends[idx].copy(), ws[idx].copy()))
                else:
                    samples_in.append(None)
            comps.append(ComponentSketch(members=members, deg_out=deg_out,
                                         deg_in=deg_in, samples_out=samples_out,
                                         samples_in=samples_in))
        classes.append(ClassSketch(index=cls.index, sparse_tails=cls.sparse_tails,
                                   sparse_heads=cls.sparse_heads,
                                   sparse_weights=cls.sparse_weights,
                                   components=comps))
    return ForEachSketch(n=skel.n, beta=skel.beta, eps=skel.eps, alpha=skel.alpha,
                         lam=skel.lam, ceil_alpha=ca, seed=int(seed),
                         mode=skel.mode, classes=classes)


def build_sketch(g, beta, eps, mode="exact", seed=0):
    """Peel, record degrees, and sample; deterministic given the seed."""
    return sample_skeleton(build_skeleton(g, beta, eps, mode=mode), seed)


def stored_edges_leaving(tails, heads, weights, ind):
    """Exact weight of stored edges from the cut to its complement."""
    if not tails.size:
        return 0.0
    crossing = ind[tails] & ~ind[heads]
    return float(np.add.reduce(np.where(crossing, weights, 0.0)))


def component_estimate(comp, ind, ceil_alpha):
    """Degree-scaled sample estimate of one dense component's contribution.

    Reads the smaller of the component's two cut sides (ties favor the cut
    side): outgoing samples from inside the cut, incoming samples otherwise,
    each scaled by degree / ceil_alpha.
    """
    member_in = ind[comp.members]
    k_s = int(np.count_nonzero(member_in))
    k = comp.members.shape[0]
    if k_s == 0 or k_s == k:
        return 0.0
    use_out = 2 * k_s <= k
    side = np.flatnonzero(member_in) if use_out else np.flatnonzero(~member_in)
    total = 0.0
    for i in side:
        if use_out:
            rec = comp.samples_out[i]
            d = int(comp.deg_out[i])
        else:
            rec = comp.samples_in[i]
            d = int(comp.deg_in[i])
        if rec is None or d == 0:
            continue
        ends, ws = rec
        cross = ~ind[ends] if use_out else ind[ends]
        total += d / ceil_alpha * float(np.add.reduce(np.where(cross, ws, 0.0)))
    return total


def query_sketch(sk, s):
    """Estimate the weight leaving the cut from a sketch."""
    if s.universe != sk.n:
        raise ValueError(f"cut universe {s.universe} does not match sketch n {sk.n}")
    ind = s.indicator()
    j_s = 0.0
    i_s = 0.0
    for cls in sk.classes:
        j_s += stored_edges_leaving(cls.sparse_tails, cls.sparse_heads,
                                    cls.sparse_weights, ind)
        for comp in cls.components:
            i_s += component_estimate(comp, ind, sk.ceil_alpha)
    return CutEstimate(total=i_s + j_s, i_s=i_s, j_s=j_s)


def certify_exact(skel):
    """Re-check that no sparse cut survives in any final component."""
    ok = True
    for cls in skel.classes:
        for comp in cls.components:
            member_set = set(int(v) for v in comp.members)
            keep = np.array([int(t) in member_set for t in cls.remaining_tails],
                            dtype=bool)

            class _View:
                graph = _Universe(skel.n)
                tails = cls.remaining_tails[keep]
                heads = cls.remaining_heads[keep]

            cut = oracle.find_sparse_cut_exact(_View(), skel.lam,
                                               vertices=comp.members.tolist())
            if cut is not None:
                ok = False
    return ok


class _Universe:
    """Minimal graph stand-in: only the vertex count is consulted."""

    def __init__(self, n):
        self.n = n


def sparse_edge_count(sk):
    return sum(int(cls.sparse_tails.size) for cls in sk.classes)


def sketch_size_bits(sk):
    from .serialize import foreach_size_bits

    return foreach_size_bits(sk)
