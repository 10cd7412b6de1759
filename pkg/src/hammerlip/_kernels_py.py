"""Pure-Python fallback for the patience-pile kernels.

Semantically identical to the compiled `hammerlip._kernels` (same pile rule,
same recovered predecessors), roughly 30-60x slower on large inputs.
"""

from __future__ import annotations

from bisect import bisect_right

import numpy as np


def lnds_length(ys) -> int:
    tails: list[float] = []
    append = tails.append
    for y in np.asarray(ys, dtype=np.float64).tolist():
        pos = bisect_right(tails, y)
        if pos == len(tails):
            append(y)
        else:
            tails[pos] = y
    return len(tails)


def lnds_heights(ys):
    values = np.asarray(ys, dtype=np.float64).tolist()
    heights = np.empty(len(values), dtype=np.int64)
    tails: list[float] = []
    append = tails.append
    for i, y in enumerate(values):
        pos = bisect_right(tails, y)
        if pos == len(tails):
            append(y)
        else:
            tails[pos] = y
        heights[i] = pos + 1
    return len(tails), heights


def lnds_path(ys):
    values = np.asarray(ys, dtype=np.float64).tolist()
    n = len(values)
    prev = np.empty(n, dtype=np.int64)
    if n == 0:
        return 0, prev, -1
    tails: list[float] = []
    top: list[int] = []
    for i, y in enumerate(values):
        pos = bisect_right(tails, y)
        prev[i] = top[pos - 1] if pos > 0 else -1
        if pos == len(tails):
            tails.append(y)
            top.append(i)
        else:
            tails[pos] = y
            top[pos] = i
    return len(tails), prev, top[-1]
