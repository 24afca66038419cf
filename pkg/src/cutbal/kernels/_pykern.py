"""Pure-numpy fallback for the batch cut kernels.

Accumulation happens edge by edge (in edge-id order), so the float results
are bit-identical to the compiled kernel, which sums in the same order.
"""

import numpy as np


def cut_weights(tails, heads, weights, masks):
    k = masks.shape[0]
    out_w = np.zeros(k, dtype=np.float64)
    in_w = np.zeros(k, dtype=np.float64)
    for e in range(tails.shape[0]):
        tb = (masks >> np.uint64(tails[e])) & np.uint64(1)
        hb = (masks >> np.uint64(heads[e])) & np.uint64(1)
        w = weights[e]
        out_w += np.where((tb == 1) & (hb == 0), w, 0.0)
        in_w += np.where((hb == 1) & (tb == 0), w, 0.0)
    return out_w, in_w


def cut_counts(tails, heads, masks):
    k = masks.shape[0]
    out_c = np.zeros(k, dtype=np.int64)
    in_c = np.zeros(k, dtype=np.int64)
    for e in range(tails.shape[0]):
        tb = (masks >> np.uint64(tails[e])) & np.uint64(1)
        hb = (masks >> np.uint64(heads[e])) & np.uint64(1)
        out_c += ((tb == 1) & (hb == 0)).astype(np.int64)
        in_c += ((hb == 1) & (tb == 0)).astype(np.int64)
    return out_c, in_c


def mask_sums(values, masks):
    sums = np.zeros(masks.shape[0], dtype=np.float64)
    for v in range(values.shape[0]):
        bit = (masks >> np.uint64(v)) & np.uint64(1)
        sums += np.where(bit == 1, values[v], 0.0)
    return sums
