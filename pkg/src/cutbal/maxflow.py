"""Max flow on undirected capacitated graphs via strength-weighted sampling.

Edges of the input graph are treated as undirected capacities.  Augmenting
paths are searched inside a small sample of the residual network, drawn with
probability proportional to capacity over strength; the sample size doubles
whenever no path is found, and a final exhaustive pass guarantees the exact
value.  Every s-t cut of a residual network is 2/gamma-balanced where gamma
is the fraction of flow still missing, which is what makes the sampled
residual keep an augmenting path.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from ._util import TAG_MAXFLOW, rng_stream
from .errors import BudgetError
from .forall import sample_with_strengths
from .graph import DiGraph
from .oracle import MAX_ST_ENUM_N, _st_masks
from .strength import StrengthMap, compute_strengths

_TOL = 1e-12


class FlowState:
    """Flow over an undirected capacitated graph.

    ``flow[e]`` is signed along the stored orientation; the residual keeps
    capacity - flow forwards and capacity + flow backwards.
    """

    def __init__(self, g, s, t):
        s, t = int(s), int(t)
        if s == t:
            raise ValueError("source and sink must differ")
        if not (0 <= s < g.n and 0 <= t < g.n):
            raise ValueError("source/sink outside vertex range")
        self.g = g
        self.s = s
        self.t = t
        self.flow = np.zeros(g.m)
        self.value = 0.0
        self.strengths = None
        self._adj = [[] for _ in range(g.n)]
        for e in range(g.m):
            self._adj[int(g.tails[e])].append(2 * e)
            self._adj[int(g.heads[e])].append(2 * e + 1)

    @classmethod
    def from_flow(cls, g, s, t, flow, value):
        """Rebuild a state captured mid-run."""
        fs = cls(g, s, t)
        fs.flow = np.array(flow, dtype=np.float64)
        fs.value = float(value)
        return fs

    def residual_cap(self, arc):
        e = arc >> 1
        if arc & 1:
            return float(self.g.weights[e] + self.flow[e])
        return float(self.g.weights[e] - self.flow[e])

    def arc_head(self, arc):
        e = arc >> 1
        return int(self.g.tails[e]) if arc & 1 else int(self.g.heads[e])

    def residual_digraph(self):
        """Residual network as a DiGraph; returns (graph, parent edge ids)."""
        rows = []
        parents = []
        for e in range(self.g.m):
            t, h, u = self.g.edge(e)
            fwd = u - self.flow[e]
            bwd = u + self.flow[e]
            if fwd > _TOL:
                rows.append((t, h, fwd))
                parents.append(e)
            if bwd > _TOL:
                rows.append((h, t, bwd))
                parents.append(e)
        return DiGraph(self.g.n, rows), np.array(parents, dtype=np.int64)

    def augment_once(self, allowed=None):
        """Shortest augmenting path over residual arcs (optionally restricted
        to an arc-id set); returns the pushed amount, 0.0 when no path."""
        parent_arc = np.full(self.g.n, -1, dtype=np.int64)
        parent_arc[self.s] = -2
        queue = [self.s]
        qi = 0
        while qi < len(queue) and parent_arc[self.t] == -1:
            v = queue[qi]
            qi += 1
            for arc in self._adj[v]:
                if allowed is not None and arc not in allowed:
                    continue
                w = self.arc_head(arc)
                if parent_arc[w] == -1 and self.residual_cap(arc) > _TOL:
                    parent_arc[w] = arc
                    queue.append(w)
        if parent_arc[self.t] == -1:
            return 0.0
        path = []
        v = self.t
        while v != self.s:
            arc = int(parent_arc[v])
            path.append(arc)
            e = arc >> 1
            v = int(self.g.heads[e]) if arc & 1 else int(self.g.tails[e])
        push = min(self.residual_cap(arc) for arc in path)
        for arc in path:
            e = arc >> 1
            self.flow[e] += -push if arc & 1 else push
        self.value += push
        return push

    def exhaust(self):
        """Augment in the full residual network until no path remains."""
        while self.augment_once() > 0.0:
            pass
        return self.value

    def gamma(self, max_value=None):
        """Remaining-flow fraction (v - f) / v."""
        if max_value is None:
            max_value = self.max_value()
        if max_value <= 0:
            raise ValueError("gamma undefined: max flow value is 0")
        return (max_value - self.value) / max_value

    def max_value(self):
        clone = FlowState(self.g, self.s, self.t)
        clone.flow = self.flow.copy()
        clone.value = self.value
        return clone.exhaust()


@dataclass
class KLResult:
    value: float
    flow: np.ndarray
    trace: list
    states: list = field(default_factory=list)


def karger_levine(g, s, t, seed=0, capture_states=False):
    """Sampled augmenting-path max flow; exact by construction.

    Strengths are computed once on the input graph and reused for every
    residual sample.  Sampled duplicates are discarded before the path
    search; augmentation continues inside the sampled arcs until none
    remain there, then the sample size doubles on failure.
    """
    sm = compute_strengths(g)
    state = FlowState(g, s, t)
    state.strengths = sm
    n, m = g.n, g.m
    rng = rng_stream(seed, TAG_MAXFLOW)
    importance = np.zeros(m)
    pos = (g.weights > 0) & (sm.values > 0)
    importance[pos] = g.weights[pos] / sm.values[pos]
    trace = []
    states = []
    alpha = 1
    while alpha * n < m:
        caps = np.array([state.residual_cap(a) for a in range(2 * m)])
        arc_ids = np.flatnonzero(caps > _TOL)
        arc_w = importance[arc_ids >> 1]
        total_w = arc_w.sum()
        if total_w <= 0:
            break
        draw = rng.choice(arc_ids, size=alpha * n, replace=True, p=arc_w / total_w)
        allowed = set(int(a) for a in np.unique(draw))
        augmentations = 0
        while state.augment_once(allowed=allowed) > 0.0:
            augmentations += 1
        trace.append({"alpha": alpha, "sampled": int(alpha * n),
                      "distinct_arcs": len(allowed),
                      "augmentations": augmentations,
                      "flow": state.value})
        if capture_states:
            states.append((state.flow.copy(), state.value))
        if augmentations == 0:
            alpha *= 2
    state.exhaust()
    trace.append({"alpha": alpha, "sampled": 0, "distinct_arcs": 2 * m,
                  "augmentations": -1, "flow": state.value})
    if capture_states:
        states.append((state.flow.copy(), state.value))
    return KLResult(value=state.value, flow=state.flow.copy(), trace=trace,
                    states=states)


def residual_balance_bound(fs, gamma):
    """Max balance over every s-t cut of the residual network vs 2/gamma.

    Enumerates all cuts with s inside and t outside (budget n <= 20) and
    returns (max observed balance, 2/gamma, ok).
    """
    if fs.g.n > MAX_ST_ENUM_N:
        raise BudgetError(f"residual balance enumeration capped at {MAX_ST_ENUM_N}")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    residual, _ = fs.residual_digraph()
    bound = 2.0 / gamma
    worst = 0.0
    for masks in _st_masks(fs.g.n, fs.s, fs.t):
        out_w, in_w = kernels.cut_weights(residual.tails, residual.heads,
                                          residual.weights, masks)
        with np.errstate(divide="ignore", invalid="ignore"):
            bal = np.where((out_w > 0) & (in_w > 0),
                           np.maximum(out_w / in_w, in_w / out_w), math.inf)
        bal[(out_w == 0) & (in_w == 0)] = 1.0
        worst = max(worst, float(bal.max()))
    return worst, bound, worst <= bound + 1e-9


def sample_residual(fs, beta=None, eps=0.1, seed=0, d=3.0):
    """Balance-boosted sample of the residual network.

    Defaults to beta = 2/gamma per the residual balance bound; strengths are
    the ones computed on the original graph, carried per parent edge.
    """
    gamma = fs.gamma()
    if gamma <= 0:
        raise ValueError("residual sampling needs gamma > 0 (flow not saturated)")
    if beta is None:
        beta = 2.0 / gamma
    if fs.strengths is None:
        fs.strengths = compute_strengths(fs.g)
    residual, parents = fs.residual_digraph()
    arc_strengths = StrengthMap(fs.strengths.values[parents].copy(), exact=False)
    return sample_with_strengths(residual, arc_strengths, beta, eps, d=d,
                                 seed=seed).h


def st_connected(g, s, t):
    """Directed reachability from s to t over positive-weight edges."""
    adj = [[] for _ in range(g.n)]
    for e in range(g.m):
        if g.weights[e] > 0:
            adj[int(g.tails[e])].append(int(g.heads[e]))
    seen = [False] * g.n
    seen[s] = True
    stack = [s]
    while stack:
        v = stack.pop()
        if v == t:
            return True
        for w in adj[v]:
            if not seen[w]:
                seen[w] = True
                stack.append(w)
    return seen[t]
