"""Expander-layered cut sketch: decompose, store low-degree edges, sample.

Instead of peeling sparse cuts, each weight class is recursively partitioned
into parts whose undirected unweighted view has no low-conductance sweep cut
(brute-force certified when the part is small).  Edges inside parts are
consumed at the current level: edges at vertices of total degree at most
alpha are stored exactly (iterated to a fixed point), the rest are covered
by degree-scaled samples.  Cross-part edges move to the next level; every
level keeps at least half of its edges inside parts, so the level count is
logarithmic.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from ._spectral import fiedler_order, multiplicity_adjacency, prefix_conductances
from ._util import TAG_FAST_IN, TAG_FAST_OUT, connected_components, rng_stream
from .errors import BudgetError
from .foreach import (CutEstimate, ComponentSkeleton, ComponentSketch,
                      check_sketch_weights, component_estimate,
                      stored_edges_leaving)
from .graph import weight_classes

BRUTE_CONDUCTANCE_LIMIT = 26


def default_phi_star(n):
    """Conductance target 1 / (4 log2(n)^3), before per-round halving."""
    return 1.0 / (4.0 * math.log2(max(n, 2)) ** 3)


@dataclass(frozen=True)
class Decomposition:
    parts: list            # sorted vertex arrays covering the touched set
    certificates: list     # per part: "trivial", "brute" or "sweep"
    phi_star: float        # target actually used (after halving rounds)
    edges_total: int
    edges_retained: int


def _brute_min_conductance(members, tails, heads):
    """Exact minimum-conductance cut of a connected unweighted multigraph
    group; returns (phi, local indicator) with phi=inf for size<2."""
    c = len(members)
    if c < 2:
        return math.inf, None
    if c > BRUTE_CONDUCTANCE_LIMIT:
        raise BudgetError(f"brute conductance capped at {BRUTE_CONDUCTANCE_LIMIT}")
    local = {int(v): i for i, v in enumerate(members)}
    lt = np.array([local[int(t)] for t in tails], dtype=np.int64)
    lh = np.array([local[int(h)] for h in heads], dtype=np.int64)
    deg = np.zeros(c)
    np.add.at(deg, lt, 1.0)
    np.add.at(deg, lh, 1.0)
    total = float(deg.sum())
    best = math.inf
    best_mask = None
    from ._util import proper_masks

    for masks in proper_masks(c):
        out_c, in_c = kernels.cut_counts(lt, lh, masks)
        cross = (out_c + in_c).astype(np.float64)
        vol = kernels.mask_sums(deg, masks)
        small = np.minimum(vol, total - vol)
        with np.errstate(divide="ignore", invalid="ignore"):
            phi = np.where(small > 0, cross / small, math.inf)
        i = int(np.argmin(phi))
        if phi[i] < best:
            best = float(phi[i])
            best_mask = int(masks[i])
    if best_mask is None:
        return math.inf, None
    ind = np.array([(best_mask >> i) & 1 for i in range(c)], dtype=bool)
    return best, ind


def _sweep_min_conductance(members, tails, heads):
    """Best Fiedler sweep cut; returns (phi, local indicator)."""
    c = len(members)
    adj = multiplicity_adjacency(members, tails, heads)
    order = fiedler_order(adj)
    phis = prefix_conductances(adj, order)
    if phis.size == 0:
        return math.inf, None
    k = int(np.argmin(phis))
    ind = np.zeros(c, dtype=bool)
    ind[order[:k + 1]] = True
    return float(phis[k]), ind


def _decompose_once(n, tails, heads, phi_star, brute_limit):
    parts = []
    certs = []
    stack = list(reversed(connected_components(n, tails, heads,
                                               vertices=range(n))))
    while stack:
        group = stack.pop()
        if len(group) == 1:
            parts.append(group)
            certs.append("trivial")
            continue
        group_set = set(int(v) for v in group)
        keep = np.array([int(t) in group_set and int(h) in group_set
                         for t, h in zip(tails, heads)], dtype=bool)
        gt, gh = tails[keep], heads[keep]
        if len(group) <= brute_limit:
            phi, ind = _brute_min_conductance(group, gt, gh)
            cert = "brute"
        else:
            phi, ind = _sweep_min_conductance(group, gt, gh)
            cert = "sweep"
        if ind is None or phi >= phi_star:
            parts.append(group)
            certs.append(cert)
            continue
        side = [int(group[i]) for i in np.flatnonzero(ind)]
        rest = [int(group[i]) for i in np.flatnonzero(~ind)]
        for half in (side, rest):
            half_set = set(half)
            hk = keep.copy()
            hk &= np.array([int(t) in half_set and int(h) in half_set
                            for t, h in zip(tails, heads)], dtype=bool)
            for comp in connected_components(n, tails[hk], heads[hk], vertices=half):
                stack.append(comp)
    order = np.argsort([int(p[0]) for p in parts], kind="stable")
    return [parts[i] for i in order], [certs[i] for i in order]


def expander_decompose(g, phi_star=None, brute_limit=BRUTE_CONDUCTANCE_LIMIT):
    """Partition the undirected unweighted view of ``g`` into certified parts.

    Guarantees that at least half the edges stay inside parts: the target
    conductance is halved per round until retention holds (with no splits at
    all, parts are connected components and every edge is retained).
    """
    tails = np.asarray(g.tails, dtype=np.int64)
    heads = np.asarray(g.heads, dtype=np.int64)
    n = g.n
    m = int(tails.shape[0])
    phi = default_phi_star(n) if phi_star is None else float(phi_star)
    while True:
        parts, certs = _decompose_once(n, tails, heads, phi, brute_limit)
        part_of = {}
        for i, p in enumerate(parts):
            for v in p:
                part_of[int(v)] = i
        retained = sum(1 for t, h in zip(tails, heads)
                       if part_of.get(int(t)) == part_of.get(int(h)))
        if 2 * retained >= m:
            return Decomposition(parts=parts, certificates=certs, phi_star=phi,
                                 edges_total=m, edges_retained=retained)
        phi /= 2.0


@dataclass
class FastLevelSkeleton:
    phi_star: float
    edges_total: int
    edges_retained: int
    low_degree_tails: np.ndarray
    low_degree_heads: np.ndarray
    low_degree_weights: np.ndarray
    parts: list                      # ComponentSkeleton per part
    certificates: list
    low_degree_edge_ids: np.ndarray = field(default=None, repr=False)
    sampled_edge_ids: np.ndarray = field(default=None, repr=False)


@dataclass
class FastClassSkeleton:
    index: int
    levels: list


@dataclass
class FastSkeleton:
    n: int
    beta: float
    eps: float
    alpha: float
    ceil_alpha: int
    classes: list


@dataclass
class FastLevelSketch:
    phi_star: float
    edges_total: int
    edges_retained: int
    low_degree_tails: np.ndarray
    low_degree_heads: np.ndarray
    low_degree_weights: np.ndarray
    parts: list                      # ComponentSketch per part


@dataclass
class FastClassSketch:
    index: int
    levels: list


@dataclass
class FastSketch:
    n: int
    beta: float
    eps: float
    alpha: float
    ceil_alpha: int
    seed: int
    classes: list


def fast_alpha(n, beta, eps):
    """Per-vertex sample count sqrt(beta) * ln(n)^(3/2) / eps."""
    return math.sqrt(beta) * math.log(max(n, 2)) ** 1.5 / eps


def _part_skeleton(n, members, tails, heads, weights, edge_ids, alpha):
    """Split a part's intra edges into low-degree stored edges (fixed point)
    and the remaining sample universe; returns (stored ids, ComponentSkeleton,
    remaining ids)."""
    ids = list(edge_ids)
    stored = []
    while True:
        deg = {}
        for e in ids:
            deg[int(tails[e])] = deg.get(int(tails[e]), 0) + 1
            deg[int(heads[e])] = deg.get(int(heads[e]), 0) + 1
        low = {v for v, d in deg.items() if d <= alpha}
        if not low:
            break
        moved = [e for e in ids if int(tails[e]) in low or int(heads[e]) in low]
        if not moved:
            break
        stored.extend(moved)
        ids = [e for e in ids if not (int(tails[e]) in low or int(heads[e]) in low)]
    member_list = [int(v) for v in members]
    deg_out = {v: 0 for v in member_list}
    deg_in = {v: 0 for v in member_list}
    out_edges = {v: ([], []) for v in member_list}
    in_edges = {v: ([], []) for v in member_list}
    for e in ids:
        t, h, w = int(tails[e]), int(heads[e]), float(weights[e])
        deg_out[t] += 1
        out_edges[t][0].append(h)
        out_edges[t][1].append(w)
        deg_in[h] += 1
        in_edges[h][0].append(t)
        in_edges[h][1].append(w)
    comp = ComponentSkeleton(
        members=np.array(sorted(member_list), dtype=np.int64),
        deg_out=deg_out, deg_in=deg_in,
        out_edges={v: (np.array(e[0], dtype=np.int64), np.array(e[1]))
                   for v, e in out_edges.items()},
        in_edges={v: (np.array(e[0], dtype=np.int64), np.array(e[1]))
                  for v, e in in_edges.items()},
    )
    return stored, comp, ids


def build_fast_skeleton(g, beta, eps, phi_star=None):
    """Layer every weight class by recursive expander decomposition."""
    if beta < 1:
        raise ValueError("beta must be >= 1")
    if not (0 < eps < 1):
        raise ValueError("eps must lie in (0, 1)")
    check_sketch_weights(g)
    alpha = fast_alpha(g.n, beta, eps)
    base_phi = default_phi_star(g.n) if phi_star is None else float(phi_star)
    classes = []
    for view in weight_classes(g):
        tails = np.asarray(view.tails, dtype=np.int64)
        heads = np.asarray(view.heads, dtype=np.int64)
        weights = np.asarray(view.weights, dtype=np.float64)
        parent_ids = np.asarray(view.edge_ids, dtype=np.int64)
        current = list(range(tails.shape[0]))
        levels = []
        while current:
            cur_t = tails[current]
            cur_h = heads[current]

            class _LevelView:
                n = g.n
                tails = cur_t
                heads = cur_h

            decomp = expander_decompose(_LevelView(), phi_star=base_phi)
            part_of = {}
            for i, p in enumerate(decomp.parts):
                for v in p:
                    part_of[int(v)] = i
            intra = [[] for _ in decomp.parts]
            crossing = []
            for e in current:
                pt = part_of[int(tails[e])]
                ph = part_of[int(heads[e])]
                if pt == ph:
                    intra[pt].append(e)
                else:
                    crossing.append(e)
            stored_ids = []
            parts = []
            sampled_ids = []
            for members, ids in zip(decomp.parts, intra):
                if not ids:
                    continue  # parts without level edges contribute nothing
                st, comp, rem = _part_skeleton(g.n, members, tails, heads,
                                               weights, ids, alpha)
                stored_ids.extend(st)
                sampled_ids.extend(rem)
                parts.append(comp)
            stored_ids = sorted(stored_ids)
            levels.append(FastLevelSkeleton(
                phi_star=decomp.phi_star,
                edges_total=decomp.edges_total,
                edges_retained=decomp.edges_retained,
                low_degree_tails=tails[stored_ids],
                low_degree_heads=heads[stored_ids],
                low_degree_weights=weights[stored_ids],
                parts=parts,
                certificates=decomp.certificates,
                low_degree_edge_ids=parent_ids[np.array(stored_ids, dtype=np.int64)],
                sampled_edge_ids=parent_ids[np.array(sorted(sampled_ids),
                                                     dtype=np.int64)],
            ))
            current = crossing
        classes.append(FastClassSkeleton(index=view.index, levels=levels))
    return FastSkeleton(n=g.n, beta=float(beta), eps=float(eps), alpha=alpha,
                        ceil_alpha=int(math.ceil(alpha)), classes=classes)


def sample_fast_skeleton(skel, seed, ceil_alpha=None):
    ca = skel.ceil_alpha if ceil_alpha is None else int(ceil_alpha)
    classes = []
    for cls in skel.classes:
        levels = []
        for li, lvl in enumerate(cls.levels):
            parts = []
            for comp in lvl.parts:
                members = comp.members
                deg_out = np.array([comp.deg_out[int(v)] for v in members],
                                   dtype=np.int64)
                deg_in = np.array([comp.deg_in[int(v)] for v in members],
                                  dtype=np.int64)
                samples_out = []
                samples_in = []
                for v in members:
                    v = int(v)
                    if comp.deg_out[v] > 0:
                        ends, ws = comp.out_edges[v]
                        idx = rng_stream(seed, TAG_FAST_OUT, cls.index, li, v) \
                            .integers(0, comp.deg_out[v], size=ca)
                        samples_out.append((ends[idx].copy(), ws[idx].copy()))
                    else:
                        samples_out.append(None)
                    if comp.deg_in[v] > 0:
                        ends, ws = comp.in_edges[v]
                        idx = rng_stream(seed, TAG_FAST_IN, cls.index, li, v) \
                            .integers(0, comp.deg_in[v], size=ca)
                        samples_in.append((ends[idx].copy(), ws[idx].copy()))
                    else:
                        samples_in.append(None)
                parts.append(ComponentSketch(members=members, deg_out=deg_out,
                                             deg_in=deg_in,
                                             samples_out=samples_out,
                                             samples_in=samples_in))
            levels.append(FastLevelSketch(
                phi_star=lvl.phi_star, edges_total=lvl.edges_total,
                edges_retained=lvl.edges_retained,
                low_degree_tails=lvl.low_degree_tails,
                low_degree_heads=lvl.low_degree_heads,
                low_degree_weights=lvl.low_degree_weights,
                parts=parts))
        classes.append(FastClassSketch(index=cls.index, levels=levels))
    return FastSketch(n=skel.n, beta=skel.beta, eps=skel.eps, alpha=skel.alpha,
                      ceil_alpha=ca, seed=int(seed), classes=classes)


def build_fast_sketch(g, beta, eps, seed=0, phi_star=None):
    """Decompose, store low-degree edges, record degrees and sample."""
    return sample_fast_skeleton(build_fast_skeleton(g, beta, eps, phi_star=phi_star),
                                seed)


def query_fast(sk, s):
    """Estimate the weight leaving the cut from an expander-layered sketch."""
    if s.universe != sk.n:
        raise ValueError(f"cut universe {s.universe} does not match sketch n {sk.n}")
    ind = s.indicator()
    j_s = 0.0
    i_s = 0.0
    for cls in sk.classes:
        for lvl in cls.levels:
            j_s += stored_edges_leaving(lvl.low_degree_tails,
                                        lvl.low_degree_heads,
                                        lvl.low_degree_weights, ind)
            for comp in lvl.parts:
                i_s += component_estimate(comp, ind, sk.ceil_alpha)
    return CutEstimate(total=i_s + j_s, i_s=i_s, j_s=j_s)


def sketch_size_bits(sk):
    from .serialize import fast_size_bits

    return fast_size_bits(sk)


def level_counts(sk):
    return {cls.index: len(cls.levels) for cls in sk.classes}
