# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled patience-pile kernels for longest nondecreasing subsequences.

Inputs are y-values of points already sorted by (x, then y) ascending; a
longest nondecreasing subsequence of those y-values is a longest chain for
non-strict coordinatewise dominance.  `hammerlip._kernels_py` mirrors these
functions in pure Python; `hammerlip.kernels` picks one at import time.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef inline Py_ssize_t _upper_bound(const double* tails, Py_ssize_t k, double y) noexcept nogil:
    # first index with tails[idx] > y
    cdef Py_ssize_t lo = 0, hi = k, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if tails[mid] <= y:
            lo = mid + 1
        else:
            hi = mid
    return lo


def lnds_length(const double[::1] ys):
    """Length of the longest nondecreasing subsequence of ``ys``."""
    cdef Py_ssize_t n = ys.shape[0]
    if n == 0:
        return 0
    tails_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] tails = tails_arr
    cdef Py_ssize_t k = 0, pos, i
    with nogil:
        for i in range(n):
            pos = _upper_bound(&tails[0], k, ys[i])
            tails[pos] = ys[i]
            if pos == k:
                k += 1
    return k


def lnds_heights(const double[::1] ys):
    """Per-element pile heights: heights[i] = longest chain ending at i.

    Returns ``(length, heights)`` with heights an int64 array.
    """
    cdef Py_ssize_t n = ys.shape[0]
    heights_arr = np.empty(n, dtype=np.int64)
    if n == 0:
        return 0, heights_arr
    tails_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] tails = tails_arr
    cdef long long[::1] heights = heights_arr
    cdef Py_ssize_t k = 0, pos, i
    with nogil:
        for i in range(n):
            pos = _upper_bound(&tails[0], k, ys[i])
            tails[pos] = ys[i]
            heights[i] = pos + 1
            if pos == k:
                k += 1
    return k, heights_arr


def lnds_path(const double[::1] ys):
    """Pile evolution with predecessor links for path recovery.

    Returns ``(length, prev, last)``: prev[i] is the index of the element
    on top of the previous pile when i was placed (-1 for pile 0) and
    ``last`` is the index of the final top of the deepest pile, so walking
    prev from ``last`` yields one maximizing chain in reverse.
    """
    cdef Py_ssize_t n = ys.shape[0]
    prev_arr = np.empty(n, dtype=np.int64)
    if n == 0:
        return 0, prev_arr, -1
    tails_arr = np.empty(n, dtype=np.float64)
    top_arr = np.empty(n, dtype=np.int64)
    cdef double[::1] tails = tails_arr
    cdef long long[::1] top = top_arr
    cdef long long[::1] prev = prev_arr
    cdef Py_ssize_t k = 0, pos, i
    with nogil:
        for i in range(n):
            pos = _upper_bound(&tails[0], k, ys[i])
            tails[pos] = ys[i]
            prev[i] = top[pos - 1] if pos > 0 else -1
            top[pos] = i
            if pos == k:
                k += 1
    return k, prev_arr, top_arr[k - 1]
