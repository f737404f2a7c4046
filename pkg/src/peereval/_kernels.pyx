# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled third-party ratio sums for the auxiliary matrix."""

import numpy as np


def ratio_sums(const double[:, ::1] a, const double[::1] w):
    """Weighted third-party shares for every ordered pair.

    ``num[i, j]`` sums ``w[k] * a[i, k] / (a[i, k] + a[j, k])`` over judges
    ``k`` other than ``i`` and ``j``; terms with a zero pair total are
    skipped. ``den[i, j]`` is ``num[j, i]``.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double aik, ajk, tot, nsum, dsum
    num_arr = np.zeros((n, n), dtype=np.float64)
    den_arr = np.zeros((n, n), dtype=np.float64)
    cdef double[:, ::1] num = num_arr
    cdef double[:, ::1] den = den_arr
    for i in range(n):
        for j in range(i + 1, n):
            nsum = 0.0
            dsum = 0.0
            for k in range(n):
                if k == i or k == j or w[k] == 0.0:
                    continue
                aik = a[i, k]
                ajk = a[j, k]
                tot = aik + ajk
                if tot == 0.0:
                    continue
                nsum += w[k] * aik / tot
                dsum += w[k] * ajk / tot
            num[i, j] = nsum
            den[i, j] = dsum
            num[j, i] = dsum
            den[j, i] = nsum
    return num_arr, den_arr
