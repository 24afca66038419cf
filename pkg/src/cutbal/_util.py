"""Internal helpers: keyed RNG streams, union-find, mask enumeration."""

import numpy as np

# Stream tags keep independent random decisions on disjoint substreams even
# when they share a user-facing seed.
TAG_SPARSIFY = 101
TAG_SKETCH_OUT = 102
TAG_SKETCH_IN = 103
TAG_FAST_OUT = 104
TAG_FAST_IN = 105
TAG_MAXFLOW = 106
TAG_GEN = 107


def rng_stream(seed, *tags):
    """Deterministic generator keyed by (seed, *tags); schedule independent."""
    return np.random.default_rng(np.random.SeedSequence((int(seed),) + tuple(int(t) for t in tags)))


if hasattr(np, "bitwise_count"):
    def popcount(masks):
        return np.bitwise_count(masks).astype(np.int64)
else:
    _POP_TABLE = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)

    def popcount(masks):
        as_bytes = np.ascontiguousarray(masks).view(np.uint8)
        return _POP_TABLE[as_bytes].reshape(masks.shape[0], -1).sum(
            axis=1, dtype=np.int64)


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def proper_masks(n, chunk=1 << 18):
    """Yield uint64 arrays of bitmasks for proper nonempty S with 0 in S,
    excluding the full set: one representative per complement pair."""
    full = (1 << n) - 1
    # masks are 1 + 2*j for j in [0, 2^(n-1)), minus the full mask
    total = 1 << (n - 1)
    start = 0
    while start < total:
        stop = min(start + chunk, total)
        block = (np.arange(start, stop, dtype=np.uint64) << np.uint64(1)) | np.uint64(1)
        if stop == total:
            block = block[:-1]  # drop the full set
        elif int(block[-1]) == full:
            block = block[:-1]
        if block.size:
            yield block
        start = stop


def connected_components(n, tails, heads, vertices=None):
    """Undirected connected components over the given edges.

    Returns a list of sorted vertex arrays, one per component that contains
    at least one vertex of interest; ordered by smallest member.  When
    `vertices` is None only vertices touched by an edge are reported.
    """
    uf = UnionFind(n)
    for t, h in zip(tails, heads):
        uf.union(int(t), int(h))
    groups = {}
    if vertices is None:
        touched = set(int(t) for t in tails) | set(int(h) for h in heads)
        vertices = sorted(touched)
    for v in vertices:
        groups.setdefault(uf.find(int(v)), []).append(int(v))
    comps = [np.array(sorted(g), dtype=np.int64) for g in groups.values()]
    comps.sort(key=lambda c: int(c[0]))
    return comps
