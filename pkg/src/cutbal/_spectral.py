"""Spectral sweep cuts on the undirected multigraph view of a vertex group.

Used both for heuristic sparse-cut discovery and for recursive expander
partitioning.  Everything is deterministic: dense eigensolver, fixed sign
convention, stable sort.
"""

import numpy as np


def multiplicity_adjacency(members, tails, heads):
    """Symmetric edge-multiplicity matrix over ``members`` (local indexing)."""
    local = {int(v): i for i, v in enumerate(members)}
    c = len(members)
    adj = np.zeros((c, c))
    for t, h in zip(tails, heads):
        t, h = int(t), int(h)
        if t in local and h in local:
            adj[local[t], local[h]] += 1.0
            adj[local[h], local[t]] += 1.0
    return adj


def fiedler_order(adj):
    """Vertex order by the second eigenvector of the normalized Laplacian.

    Zero-degree vertices sort first.  Returns local indices.
    """
    c = adj.shape[0]
    deg = adj.sum(axis=1)
    scale = np.where(deg > 0, 1.0 / np.sqrt(np.maximum(deg, 1e-300)), 0.0)
    lap = np.eye(c) - (adj * scale[:, None]) * scale[None, :]
    _, vecs = np.linalg.eigh(lap)
    f = vecs[:, 1] if c > 1 else np.zeros(c)
    for x in f:
        if abs(x) > 1e-12:
            if x < 0:
                f = -f
            break
    keys = np.where(deg > 0, f, -np.inf)
    return np.argsort(keys, kind="stable")


def sweep_prefixes(members, tails, heads):
    """Candidate cuts: prefixes of the Fiedler order (local index arrays)."""
    adj = multiplicity_adjacency(members, tails, heads)
    order = fiedler_order(adj)
    return [order[:k] for k in range(1, len(members))], adj


def prefix_conductances(adj, order):
    """Conductance of every prefix cut of ``order`` (unit edge weights)."""
    deg = adj.sum(axis=1)
    total = deg.sum()
    vol = 0.0
    cross = 0.0
    in_prefix = np.zeros(adj.shape[0], dtype=bool)
    out = []
    for k, v in enumerate(order[:-1]):
        v = int(v)
        inside = adj[v][in_prefix].sum()
        cross += deg[v] - 2.0 * inside
        vol += deg[v]
        in_prefix[v] = True
        small = min(vol, total - vol)
        out.append(cross / small if small > 0 else np.inf)
    return np.array(out)
