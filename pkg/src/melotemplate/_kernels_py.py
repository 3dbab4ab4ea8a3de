"""Pure-Python reference versions of the compiled kernels."""
from __future__ import annotations

import numpy as np


def viterbi_lex(emission, switch_penalty: float) -> np.ndarray:
    """Max-score chord path; among equal scores the lexicographically first.

    Scores are accumulated back to front so that the forward pass can choose,
    segment by segment, the earliest candidate that still reaches the optimum.
    """
    em = np.asarray(emission, dtype=np.float64)
    S, C = em.shape
    if S == 0:
        return np.zeros(0, dtype=np.int64)
    suffix = [[0.0] * C for _ in range(S)]
    suffix[S - 1] = [float(v) for v in em[S - 1]]
    for s in range(S - 2, -1, -1):
        nxt = suffix[s + 1]
        row = em[s]
        for c in range(C):
            best = nxt[c]
            for d in range(C):
                if d != c:
                    v = nxt[d] - switch_penalty
                    if v > best:
                        best = v
            suffix[s][c] = float(row[c]) + best
    path = np.empty(S, dtype=np.int64)
    prev, best = 0, suffix[0][0]
    for c in range(1, C):
        if suffix[0][c] > best:
            prev, best = c, suffix[0][c]
    path[0] = prev
    for s in range(1, S):
        d = 0
        best = suffix[s][0] - (switch_penalty if prev != 0 else 0.0)
        for c in range(1, C):
            v = suffix[s][c] - (switch_penalty if prev != c else 0.0)
            if v > best:
                best, d = v, c
        path[s] = prev = d
    return path


def dtw_int(x, y) -> tuple[int, int]:
    """Integer DTW: minimal total ``|x_i - y_j|``, then shortest path.

    Returns ``(cost, path_length)``. Only two rows are kept in memory.
    """
    x = [int(v) for v in x]
    y = [int(v) for v in y]
    n, m = len(x), len(y)
    if n == 0 or m == 0:
        raise ValueError("empty curve")
    prev: list[tuple[int, int]] = []
    for i in range(n):
        cur: list[tuple[int, int]] = []
        xi = x[i]
        for j in range(m):
            c = abs(xi - y[j])
            if i == 0 and j == 0:
                cur.append((c, 1))
                continue
            cands = []
            if i > 0 and j > 0:
                cands.append(prev[j - 1])
            if i > 0:
                cands.append(prev[j])
            if j > 0:
                cands.append(cur[j - 1])
            bc, bl = min(cands)
            cur.append((bc + c, bl + 1))
        prev = cur
    return prev[-1]
