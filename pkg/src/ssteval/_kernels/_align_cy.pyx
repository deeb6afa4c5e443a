# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled alignment kernels; same contract as the pure-Python twin."""

import numpy as np

BACKEND_NAME = "compiled"


def edit_distance(hyp, ref):
    """Word-level Levenshtein distance between two id sequences."""
    cdef int[::1] a = np.ascontiguousarray(hyp, dtype=np.intc)
    cdef int[::1] b = np.ascontiguousarray(ref, dtype=np.intc)
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t n = b.shape[0]
    cdef int[::1] prev = np.arange(n + 1, dtype=np.intc)
    cdef int[::1] cur = np.zeros(n + 1, dtype=np.intc)
    cdef int[::1] tmp
    cdef Py_ssize_t i, j
    cdef int sub, ins, dele, best
    for i in range(1, m + 1):
        cur[0] = <int> i
        for j in range(1, n + 1):
            sub = prev[j - 1] + (a[i - 1] != b[j - 1])
            ins = cur[j - 1] + 1
            dele = prev[j] + 1
            best = sub
            if ins < best:
                best = ins
            if dele < best:
                best = dele
            cur[j] = best
        tmp = prev
        prev = cur
        cur = tmp
    return int(prev[n])


def mwer_partition(hyp, ref, offsets):
    """Minimum-total-edit-distance partition of hyp into contiguous spans
    matched against the ref segments delimited by offsets; leftmost
    boundaries among cost-minimal partitions. Returns (hyp_offsets, cost)."""
    cdef int[::1] h = np.ascontiguousarray(hyp, dtype=np.intc)
    cdef int[::1] r_all = np.ascontiguousarray(ref, dtype=np.intc)
    cdef long long[::1] offs = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef Py_ssize_t n = h.shape[0]
    cdef Py_ssize_t big_r = r_all.shape[0]
    cdef Py_ssize_t m = offs.shape[0] - 1

    cdef int[:, ::1] snaps = np.zeros((m + 1, n + 1), dtype=np.intc)
    cdef int[::1] g = np.empty(n + 1, dtype=np.intc)
    cdef int[::1] gnew = np.empty(n + 1, dtype=np.intc)
    cdef int[::1] tmp
    cdef Py_ssize_t i, j, jj, next_snap, start, length
    cdef Py_ssize_t r
    cdef int tok, sub, dele, ins, best, total, prefix_cost

    for j in range(n + 1):
        g[j] = <int> (n - j)
    next_snap = m
    while next_snap >= 0 and offs[next_snap] == big_r:
        snaps[next_snap, :] = g
        next_snap -= 1
    for r in range(big_r - 1, -1, -1):
        tok = r_all[r]
        gnew[n] = <int> (big_r - r)
        for j in range(n - 1, -1, -1):
            sub = g[j + 1] + (tok != h[j])
            dele = g[j] + 1
            ins = gnew[j + 1] + 1
            best = sub
            if dele < best:
                best = dele
            if ins < best:
                best = ins
            gnew[j] = best
        tmp = g
        g = gnew
        gnew = tmp
        while next_snap >= 0 and offs[next_snap] == r:
            snaps[next_snap, :] = g
            next_snap -= 1

    total = snaps[0, 0]

    cdef int[::1] row = np.empty(n + 1, dtype=np.intc)
    cdef int[::1] row_new = np.empty(n + 1, dtype=np.intc)
    bounds = [0]
    prefix_cost = 0
    start = 0
    for i in range(1, m):
        length = n - start
        for jj in range(length + 1):
            row[jj] = <int> jj
        for r in range(offs[i - 1], offs[i]):
            tok = r_all[r]
            row_new[0] = row[0] + 1
            for jj in range(1, length + 1):
                sub = row[jj - 1] + (tok != h[start + jj - 1])
                dele = row[jj] + 1
                ins = row_new[jj - 1] + 1
                best = sub
                if dele < best:
                    best = dele
                if ins < best:
                    best = ins
                row_new[jj] = best
            tmp = row
            row = row_new
            row_new = tmp
        for j in range(start, n + 1):
            if prefix_cost + row[j - start] + snaps[i, j] == total:
                bounds.append(j)
                prefix_cost = prefix_cost + row[j - start]
                start = j
                break
    bounds.append(n)
    return bounds, int(total)
