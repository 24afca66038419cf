# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled batch kernels for exhaustive cut evaluation.

Each kernel takes edge arrays plus a vector of vertex-subset bitmasks and
evaluates every mask in one pass.  Semantics (including float summation
order: edge-id order within each mask) must match kernels._pykern exactly.
"""

import numpy as np


def cut_weights(const long long[::1] tails, const long long[::1] heads,
                const double[::1] weights, const unsigned long long[::1] masks):
    """Directed crossing weights (out of S, into S) for every mask."""
    cdef Py_ssize_t m = tails.shape[0]
    cdef Py_ssize_t k = masks.shape[0]
    out_arr = np.zeros(k, dtype=np.float64)
    in_arr = np.zeros(k, dtype=np.float64)
    cdef double[::1] out_w = out_arr
    cdef double[::1] in_w = in_arr
    cdef Py_ssize_t i, e
    cdef unsigned long long mask
    cdef unsigned long long tb, hb
    cdef double ow, iw
    with nogil:
        for i in range(k):
            mask = masks[i]
            ow = 0.0
            iw = 0.0
            for e in range(m):
                tb = (mask >> tails[e]) & 1ULL
                hb = (mask >> heads[e]) & 1ULL
                if tb and not hb:
                    ow = ow + weights[e]
                elif hb and not tb:
                    iw = iw + weights[e]
            out_w[i] = ow
            in_w[i] = iw
    return out_arr, in_arr


def cut_counts(const long long[::1] tails, const long long[::1] heads,
               const unsigned long long[::1] masks):
    """Directed crossing edge counts (out of S, into S) for every mask."""
    cdef Py_ssize_t m = tails.shape[0]
    cdef Py_ssize_t k = masks.shape[0]
    out_arr = np.zeros(k, dtype=np.int64)
    in_arr = np.zeros(k, dtype=np.int64)
    cdef long long[::1] out_c = out_arr
    cdef long long[::1] in_c = in_arr
    cdef Py_ssize_t i, e
    cdef unsigned long long mask
    cdef unsigned long long tb, hb
    cdef long long oc, ic
    with nogil:
        for i in range(k):
            mask = masks[i]
            oc = 0
            ic = 0
            for e in range(m):
                tb = (mask >> tails[e]) & 1ULL
                hb = (mask >> heads[e]) & 1ULL
                if tb and not hb:
                    oc = oc + 1
                elif hb and not tb:
                    ic = ic + 1
            out_c[i] = oc
            in_c[i] = ic
    return out_arr, in_arr


def mask_sums(const double[::1] values, const unsigned long long[::1] masks):
    """Sum of values[v] over the set bits of every mask."""
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t k = masks.shape[0]
    sum_arr = np.zeros(k, dtype=np.float64)
    cdef double[::1] sums = sum_arr
    cdef Py_ssize_t i, v
    cdef unsigned long long mask
    cdef double s
    with nogil:
        for i in range(k):
            mask = masks[i]
            s = 0.0
            for v in range(n):
                if (mask >> v) & 1ULL:
                    s = s + values[v]
            sums[i] = s
    return sum_arr
