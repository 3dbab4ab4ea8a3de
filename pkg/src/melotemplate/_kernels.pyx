# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops; semantics match ``_kernels_py`` exactly."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()


def viterbi_lex(double[:, ::1] emission, double switch_penalty):
    cdef Py_ssize_t S = emission.shape[0], C = emission.shape[1]
    cdef Py_ssize_t s, c, d, prev
    cdef double best, v
    if S == 0:
        return np.zeros(0, dtype=np.int64)
    suffix_arr = np.empty((S, C), dtype=np.float64)
    cdef double[:, ::1] suffix = suffix_arr
    for c in range(C):
        suffix[S - 1, c] = emission[S - 1, c]
    for s in range(S - 2, -1, -1):
        for c in range(C):
            best = suffix[s + 1, c]
            for d in range(C):
                if d != c:
                    v = suffix[s + 1, d] - switch_penalty
                    if v > best:
                        best = v
            suffix[s, c] = emission[s, c] + best
    path_arr = np.empty(S, dtype=np.int64)
    cdef int64_t[::1] path = path_arr
    prev = 0
    best = suffix[0, 0]
    for c in range(1, C):
        if suffix[0, c] > best:
            best = suffix[0, c]
            prev = c
    path[0] = prev
    for s in range(1, S):
        d = 0
        best = suffix[s, 0] - (switch_penalty if prev != 0 else 0.0)
        for c in range(1, C):
            v = suffix[s, c] - (switch_penalty if prev != c else 0.0)
            if v > best:
                best = v
                d = c
        path[s] = d
        prev = d
    return path_arr


def dtw_int(int64_t[::1] x, int64_t[::1] y):
    cdef Py_ssize_t n = x.shape[0], m = y.shape[0], i, j
    cdef int64_t c, bc, bl, dc, dl
    if n == 0 or m == 0:
        raise ValueError("empty curve")
    cost_prev_arr = np.empty(m, dtype=np.int64)
    cost_cur_arr = np.empty(m, dtype=np.int64)
    len_prev_arr = np.empty(m, dtype=np.int64)
    len_cur_arr = np.empty(m, dtype=np.int64)
    cdef int64_t[::1] cp = cost_prev_arr, cc = cost_cur_arr
    cdef int64_t[::1] lp = len_prev_arr, lc = len_cur_arr
    cdef int64_t[::1] tmp
    for i in range(n):
        for j in range(m):
            c = x[i] - y[j]
            if c < 0:
                c = -c
            if i == 0 and j == 0:
                cc[j] = c
                lc[j] = 1
                continue
            bc = -1
            if i > 0 and j > 0:
                bc = cp[j - 1]
                bl = lp[j - 1]
            if i > 0:
                dc = cp[j]
                dl = lp[j]
                if bc < 0 or dc < bc or (dc == bc and dl < bl):
                    bc = dc
                    bl = dl
            if j > 0:
                dc = cc[j - 1]
                dl = lc[j - 1]
                if bc < 0 or dc < bc or (dc == bc and dl < bl):
                    bc = dc
                    bl = dl
            cc[j] = bc + c
            lc[j] = bl + 1
        tmp = cp
        cp = cc
        cc = tmp
        tmp = lp
        lp = lc
        lc = tmp
    return int(cp[m - 1]), int(lp[m - 1])
