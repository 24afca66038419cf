"""Weighted directed multigraphs, cuts, balance measures and edge-list I/O.

A :class:`DiGraph` is an immutable edge list over vertices ``0..n-1``.
Parallel edges and opposite-direction pairs are allowed; self-loops are not.
Cut values are directed: ``cut_weight(g, S, "out")`` is the total weight of
edges from ``S`` to its complement, and the balance of a cut is the larger
of the two direction ratios.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError


class DiGraph:
    """Immutable weighted directed multigraph.

    Parameters
    ----------
    n : int
        Number of vertices; vertex ids are ``0..n-1``.
    edges : iterable of (tail, head, weight)
        Directed edges with non-negative weights.  Self-loops are rejected.
    """

    __slots__ = ("n", "tails", "heads", "weights")

    def __init__(self, n, edges=()):
        n = int(n)
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        rows = list(edges)
        tails = np.array([r[0] for r in rows], dtype=np.int64)
        heads = np.array([r[1] for r in rows], dtype=np.int64)
        weights = np.array([r[2] for r in rows], dtype=np.float64)
        if rows:
            if tails.min(initial=0) < 0 or heads.min(initial=0) < 0 \
                    or tails.max(initial=0) >= n or heads.max(initial=0) >= n:
                raise ValueError("edge endpoint outside [0, n)")
            if np.any(tails == heads):
                raise ValueError("self-loops are not allowed")
            if np.any(weights < 0) or not np.all(np.isfinite(weights)):
                raise ValueError("edge weights must be finite and >= 0")
        for a in (tails, heads, weights):
            a.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "tails", tails)
        object.__setattr__(self, "heads", heads)
        object.__setattr__(self, "weights", weights)

    def __setattr__(self, name, value):
        raise AttributeError("DiGraph is immutable")

    @classmethod
    def from_arrays(cls, n, tails, heads, weights):
        """Vectorized constructor; same validation as the edge-list form."""
        g = cls.__new__(cls)
        n = int(n)
        tails = np.ascontiguousarray(tails, dtype=np.int64)
        heads = np.ascontiguousarray(heads, dtype=np.int64)
        weights = np.ascontiguousarray(weights, dtype=np.float64)
        if tails.shape != heads.shape or tails.shape != weights.shape:
            raise ValueError("edge arrays must have identical shapes")
        if tails.size:
            if tails.min() < 0 or heads.min() < 0 \
                    or tails.max() >= n or heads.max() >= n:
                raise ValueError("edge endpoint outside [0, n)")
            if np.any(tails == heads):
                raise ValueError("self-loops are not allowed")
            if np.any(weights < 0) or not np.all(np.isfinite(weights)):
                raise ValueError("edge weights must be finite and >= 0")
        for a in (tails, heads, weights):
            a.setflags(write=False)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "tails", tails)
        object.__setattr__(g, "heads", heads)
        object.__setattr__(g, "weights", weights)
        return g

    @property
    def m(self):
        return int(self.tails.shape[0])

    def edge(self, e):
        return int(self.tails[e]), int(self.heads[e]), float(self.weights[e])

    def edge_list(self):
        return [self.edge(e) for e in range(self.m)]

    def reversed(self):
        """Same weights with every edge direction flipped."""
        return DiGraph(self.n, zip(self.heads, self.tails, self.weights))

    def __eq__(self, other):
        if not isinstance(other, DiGraph):
            return NotImplemented
        return (self.n == other.n
                and np.array_equal(self.tails, other.tails)
                and np.array_equal(self.heads, other.heads)
                and np.array_equal(self.weights, other.weights))

    def __hash__(self):
        return hash((self.n, self.tails.tobytes(), self.heads.tobytes(),
                     self.weights.tobytes()))

    def __repr__(self):
        return f"DiGraph(n={self.n}, m={self.m})"


class CutSet:
    """A vertex subset with a fixed universe size.

    Uses an integer bitmask for universes up to 64 vertices and a sorted id
    tuple otherwise.
    """

    __slots__ = ("members", "universe", "_mask")

    def __init__(self, members, universe):
        universe = int(universe)
        mem = tuple(sorted({int(v) for v in members}))
        if mem and (mem[0] < 0 or mem[-1] >= universe):
            raise ValueError("cut member outside [0, universe)")
        object.__setattr__(self, "members", mem)
        object.__setattr__(self, "universe", universe)
        mask = None
        if universe <= 64:
            mask = 0
            for v in mem:
                mask |= 1 << v
        object.__setattr__(self, "_mask", mask)

    def __setattr__(self, name, value):
        raise AttributeError("CutSet is immutable")

    @classmethod
    def from_mask(cls, mask, universe):
        return cls([v for v in range(universe) if (mask >> v) & 1], universe)

    @property
    def mask(self):
        if self._mask is None:
            raise ValueError("bitmask form requires universe <= 64")
        return self._mask

    def complement(self):
        return CutSet(set(range(self.universe)) - set(self.members), self.universe)

    def indicator(self):
        ind = np.zeros(self.universe, dtype=bool)
        if self.members:
            ind[list(self.members)] = True
        return ind

    def __contains__(self, v):
        if self._mask is not None:
            return bool((self._mask >> int(v)) & 1)
        return int(v) in self.members

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __eq__(self, other):
        if not isinstance(other, CutSet):
            return NotImplemented
        return self.universe == other.universe and self.members == other.members

    def __hash__(self):
        return hash((self.universe, self.members))

    def __repr__(self):
        return f"CutSet({set(self.members) if self.members else '{}'}, universe={self.universe})"


@dataclass(frozen=True)
class WeightClassView:
    """Edges of one dyadic weight class ``[2^(i-1), 2^i)`` of a parent graph."""

    index: int
    edge_ids: np.ndarray
    graph: DiGraph = field(repr=False)

    @property
    def tails(self):
        return self.graph.tails[self.edge_ids]

    @property
    def heads(self):
        return self.graph.heads[self.edge_ids]

    @property
    def weights(self):
        return self.graph.weights[self.edge_ids]


def _check_cut(g, s):
    if s.universe != g.n:
        raise ValueError(f"cut universe {s.universe} does not match graph n {g.n}")


def cut_weight(g, s, direction="out"):
    """Total weight of edges crossing the cut in one direction.

    ``out`` sums edges from ``S`` to its complement, ``in`` the reverse.
    The summation schedule is fixed, so repeated calls are bit-identical.
    """
    _check_cut(g, s)
    if direction not in ("out", "in"):
        raise ValueError("direction must be 'out' or 'in'")
    ind = s.indicator()
    tin = ind[g.tails]
    hin = ind[g.heads]
    if direction == "out":
        crossing = tin & ~hin
    else:
        crossing = ~tin & hin
    return float(np.add.reduce(np.where(crossing, g.weights, 0.0)))


def cut_balance(g, s):
    """Balance of a proper nonempty cut: max of the two direction ratios.

    Returns ``inf`` when exactly one direction carries weight and 1.0 when
    no edge crosses in either direction (vacuously balanced).
    """
    _check_cut(g, s)
    if len(s) == 0 or len(s) == g.n:
        raise ValueError("cut balance requires a proper nonempty vertex subset")
    out_w = cut_weight(g, s, "out")
    in_w = cut_weight(g, s, "in")
    if out_w == 0.0 and in_w == 0.0:
        return 1.0
    if out_w == 0.0 or in_w == 0.0:
        return math.inf
    return max(out_w / in_w, in_w / out_w)


def is_strongly_connected(g):
    """True iff every ordered vertex pair is joined by a directed path of
    positive-weight edges."""
    if g.n <= 1:
        return True
    pos = g.weights > 0
    tails = g.tails[pos]
    heads = g.heads[pos]
    fwd = [[] for _ in range(g.n)]
    bwd = [[] for _ in range(g.n)]
    for t, h in zip(tails, heads):
        fwd[t].append(int(h))
        bwd[h].append(int(t))

    def reach(adj):
        seen = np.zeros(g.n, dtype=bool)
        seen[0] = True
        stack = [0]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        return seen

    return bool(reach(fwd).all() and reach(bwd).all())


def weight_class_index(w):
    """Dyadic class of a weight: i with w in [2^(i-1), 2^i); requires w >= 1."""
    if w < 1:
        raise ValueError(f"weight classes require weights >= 1, got {w}")
    # frexp is exact: w in [2^(e-1), 2^e) iff frexp exponent is e
    _, e = math.frexp(w)
    return e


def weight_classes(g):
    """Partition edges into dyadic weight classes, empty classes omitted."""
    if g.m and g.weights.min() < 1:
        raise ValueError("weight classes require all weights >= 1")
    buckets = {}
    for e in range(g.m):
        buckets.setdefault(weight_class_index(g.weights[e]), []).append(e)
    return [WeightClassView(i, np.array(buckets[i], dtype=np.int64), g)
            for i in sorted(buckets)]


def is_eulerian(g):
    """True iff weighted in-degree equals weighted out-degree at every vertex."""
    out_deg = np.zeros(g.n)
    in_deg = np.zeros(g.n)
    np.add.at(out_deg, g.tails, g.weights)
    np.add.at(in_deg, g.heads, g.weights)
    return bool(np.allclose(out_deg, in_deg, rtol=0.0, atol=1e-9))


def read_edge_list(source):
    """Parse the text edge-list format.

    First non-comment line is the vertex count ``n``; every following line is
    ``tail head weight``.  ``#`` starts a comment line, blank lines are
    skipped.  Raises :class:`ParseError` with a line number on bad input.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = source
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if n is None:
            try:
                n = int(line)
            except ValueError:
                raise ParseError(lineno, f"expected vertex count, got {line!r}") from None
            if n < 0:
                raise ParseError(lineno, "vertex count must be non-negative")
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(lineno, f"expected 'tail head weight', got {line!r}")
        try:
            t, h = int(parts[0]), int(parts[1])
            w = float(parts[2])
        except ValueError:
            raise ParseError(lineno, f"malformed edge line {line!r}") from None
        if not (0 <= t < n and 0 <= h < n):
            raise ParseError(lineno, f"vertex id out of range [0, {n})")
        if t == h:
            raise ParseError(lineno, "self-loops are not allowed")
        if w < 0 or not math.isfinite(w):
            raise ParseError(lineno, f"weight must be finite and >= 0, got {parts[2]}")
        edges.append((t, h, w))
    if n is None:
        raise ParseError(0, "empty input: missing vertex count line")
    return DiGraph(n, edges)


def write_edge_list(g, header_comments=()):
    """Serialize a graph to the text format; edges emitted in id order."""
    lines = [f"# {c}" for c in header_comments]
    lines.append(str(g.n))
    for e in range(g.m):
        t, h, w = g.edge(e)
        lines.append(f"{t} {h} {w!r}")
    return "\n".join(lines) + "\n"
