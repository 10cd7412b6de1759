"""Kernel dispatch: compiled extension when available, pure Python otherwise.

Set ``HAMMERLIP_PURE_PYTHON=1`` to force the fallback (used by the kernel
benchmark and the backend-equivalence tests).
"""

from __future__ import annotations

import os

import numpy as np

if os.environ.get("HAMMERLIP_PURE_PYTHON"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"


def backend() -> str:
    """Name of the active kernel backend: 'cython' or 'python'."""
    return BACKEND


def _as_f64(ys) -> np.ndarray:
    return np.ascontiguousarray(ys, dtype=np.float64)


def lnds_length(ys) -> int:
    """Longest nondecreasing subsequence length of ``ys``."""
    return int(_impl.lnds_length(_as_f64(ys)))


def lnds_heights(ys) -> tuple[int, np.ndarray]:
    """(length, per-element chain heights) for ``ys``."""
    k, heights = _impl.lnds_heights(_as_f64(ys))
    return int(k), heights


def lnds_path(ys) -> tuple[int, np.ndarray, int]:
    """(length, predecessor links, last index) for path recovery."""
    k, prev, last = _impl.lnds_path(_as_f64(ys))
    return int(k), prev, int(last)


def walk_path(prev: np.ndarray, last: int, length: int) -> np.ndarray:
    """Indices of one maximizing chain, in chain order."""
    idx = np.empty(length, dtype=np.int64)
    i = last
    for pos in range(length - 1, -1, -1):
        idx[pos] = i
        i = prev[i]
    return idx
