# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled split-search kernel.

Same selection semantics, arithmetic, and tie policy as _split_numpy (the
reference): scores are exact integer sums of squared class counts divided as
doubles, compared strictly, scanning candidate features in order and
boundaries in sorted order. Both backends therefore return bit-identical
(feature, threshold) pairs.
"""

from libc.math cimport INFINITY

import numpy as np


def best_split_gathered(double[:, ::1] values, long long[:, ::1] orders,
                        long long[::1] labels, Py_ssize_t n_classes,
                        Py_ssize_t min_leaf):
    """Best (feature, threshold, score) over the gathered node block."""
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t k = values.shape[1]
    if n < 2 or k == 0:
        return -1, 0.0, -INFINITY

    cdef long long[::1] total = np.zeros(n_classes, dtype=np.int64)
    cdef long long[::1] left = np.zeros(n_classes, dtype=np.int64)
    cdef long long[::1] right = np.zeros(n_classes, dtype=np.int64)

    cdef Py_ssize_t i, j, pos, best_j = -1
    cdef long long c, n_left, n_right, sq_left, sq_right, sq_total
    cdef double lo, hi, thr, score
    cdef double best_thr = 0.0
    cdef double best_score = -INFINITY

    sq_total = 0
    for i in range(n):
        total[labels[i]] += 1
    for c in range(n_classes):
        sq_total += total[c] * total[c]

    for j in range(k):
        for c in range(n_classes):
            left[c] = 0
            right[c] = total[c]
        sq_left = 0
        sq_right = sq_total
        for i in range(n - 1):
            pos = orders[i, j]
            c = labels[pos]
            sq_left += 2 * left[c] + 1
            sq_right -= 2 * right[c] - 1
            left[c] += 1
            right[c] -= 1
            n_left = i + 1
            n_right = n - n_left
            if n_left < min_leaf or n_right < min_leaf:
                continue
            lo = values[pos, j]
            hi = values[orders[i + 1, j], j]
            if lo < hi:
                score = (<double> sq_left) / (<double> n_left) \
                    + (<double> sq_right) / (<double> n_right)
                if score > best_score:
                    thr = 0.5 * (lo + hi)
                    if thr >= hi:
                        thr = lo
                    best_j = j
                    best_thr = thr
                    best_score = score
    return best_j, best_thr, best_score
