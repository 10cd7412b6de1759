"""Boundary-augmented chains: sources on the x-axis, sinks on the y-axis.

Sources embed as (s, 0) and sinks as (0, t); with non-strict dominance all
sources chain together and so do all sinks, while a source and a sink are
never comparable (a chain cannot mix them).  On top of the augmented length
this module provides the stationary increments, the axis-budget statistic
Z, the staircase level lines of the length function, and the deterministic
crossing inequality check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import HypothesisNotMet
from .sampler import PointCloud, SourceSinkSample

__all__ = [
    "BoundaryChainResult",
    "HammersleyLine",
    "length_with_boundary",
    "boundary_increment_sources",
    "boundary_increment_sinks",
    "z_statistic",
    "hammersley_lines",
    "crossing_check",
]


@dataclass(frozen=True)
class BoundaryChainResult:
    """Augmented chain length and the boundary usage of one optimal path."""

    length: int
    uses_sources: int
    uses_sinks: int


def _window_arrays(cloud: PointCloud, x: float, y: float) -> tuple[np.ndarray, np.ndarray]:
    keep = (cloud.xs <= x) & (cloud.ys <= y)
    return cloud.xs[keep], cloud.ys[keep]


def _augmented(cloud: PointCloud, ss: SourceSinkSample, x: float, y: float):
    """Window points plus embedded boundary points, (x, y)-sorted, labeled.

    Labels: 0 = cloud point, 1 = source, 2 = sink.
    """
    cx, cy = _window_arrays(cloud, x, y)
    src = ss.sources[ss.sources <= x]
    snk = ss.sinks[ss.sinks <= y]
    xs = np.concatenate((cx, src, np.zeros(len(snk))))
    ys = np.concatenate((cy, np.zeros(len(src)), snk))
    labels = np.concatenate(
        (
            np.zeros(len(cx), dtype=np.int8),
            np.ones(len(src), dtype=np.int8),
            np.full(len(snk), 2, dtype=np.int8),
        )
    )
    order = np.lexsort((ys, xs))
    return xs[order], ys[order], labels[order]


def length_with_boundary(cloud: PointCloud, ss: SourceSinkSample, x: float, y: float) -> BoundaryChainResult:
    """Longest chain through cloud + sources + sinks inside [0, x] x [0, y]."""
    xs, ys, labels = _augmented(cloud, ss, x, y)
    if len(xs) == 0:
        return BoundaryChainResult(0, 0, 0)
    k, prev, last = kernels.lnds_path(ys)
    idx = kernels.walk_path(prev, last, k)
    path_labels = labels[idx]
    return BoundaryChainResult(k, int(np.sum(path_labels == 1)), int(np.sum(path_labels == 2)))


def _augmented_length(cloud: PointCloud, ss: SourceSinkSample, x: float, y: float) -> int:
    xs, ys, _ = _augmented(cloud, ss, x, y)
    return kernels.lnds_length(ys) if len(xs) else 0


def boundary_increment_sources(
    cloud: PointCloud, ss: SourceSinkSample, x0: float, x1: float, y0: float
) -> int:
    """Horizontal increment of the augmented length, Poisson(lam*(x1-x0)) in law."""
    if not 0 < x0 <= x1:
        raise ValueError("need 0 < x0 <= x1")
    return _augmented_length(cloud, ss, x1, y0) - _augmented_length(cloud, ss, x0, y0)


def boundary_increment_sinks(
    cloud: PointCloud, ss: SourceSinkSample, x0: float, y0: float, y1: float
) -> int:
    """Vertical increment of the augmented length, Poisson((y1-y0)/lam) in law."""
    if not 0 < y0 <= y1:
        raise ValueError("need 0 < y0 <= y1")
    return _augmented_length(cloud, ss, x0, y1) - _augmented_length(cloud, ss, x0, y0)


def z_statistic(cloud: PointCloud, ss: SourceSinkSample, x: float, y: float) -> float:
    """Largest axis budget xi with L_aug(x, y) = #(sources <= xi) + L([xi, x] x [0, y]).

    The two sides only change at source abscissae (left side jumps) and at
    cloud-point abscissae (right side drops just past them), so the supremum,
    capped at x, is attained on the candidate set {0, x} + those abscissae.
    Candidates are scanned downward; 0 is returned when none satisfies the
    defining equality.
    """
    total = _augmented_length(cloud, ss, x, y)
    cx, cy = _window_arrays(cloud, x, y)
    src = ss.sources[ss.sources <= x]
    candidates = np.unique(np.concatenate((np.array([0.0, x]), src, cx)))
    for xi in candidates[::-1]:
        n_src = int(np.searchsorted(src, xi, side="right"))
        keep = cx >= xi
        rest = kernels.lnds_length(cy[keep]) if keep.any() else 0
        if total == n_src + rest:
            return float(xi)
    return 0.0


@dataclass(frozen=True)
class HammersleyLine:
    """Staircase level line of the augmented length function.

    ``vertices`` runs from top-left to bottom-right: x nondecreasing, y
    nonincreasing, alternating South and East segments.
    """

    level: int
    vertices: np.ndarray  # (m, 2)


def hammersley_lines(
    cloud: PointCloud, ss: SourceSinkSample, x_max: float, y_max: float
) -> list[HammersleyLine]:
    """Level lines of (u, v) -> L_aug(u, v) on [0, x_max] x [0, y_max].

    Sweep construction: sinks start one line each at (0, t); each arriving
    point (cloud point or source) either pulls the lowest line lying above
    it down to its height (an East run then a South step) or starts a new
    line from the top edge.  A source pulls a line down to the axis, where
    it stays.  Line k and pile k are born together, so the pile index is
    the line's level minus one, and the number of lines equals the
    augmented length of the full window.
    """
    from bisect import bisect_right

    snk = ss.sinks[ss.sinks <= y_max]
    heights: list[float] = [float(t) for t in snk]  # ascending
    lines: list[list[tuple[float, float]]] = [[(0.0, h)] for h in heights]

    cx, cy = _window_arrays(cloud, x_max, y_max)
    src = ss.sources[ss.sources <= x_max]
    xs = np.concatenate((cx, src))
    ys = np.concatenate((cy, np.zeros(len(src))))
    order = np.lexsort((ys, xs))

    for px, py in zip(xs[order].tolist(), ys[order].tolist()):
        pos = bisect_right(heights, py)
        if pos == len(heights):
            heights.append(py)
            start = [(px, y_max)] if py < y_max else []
            lines.append(start + [(px, py)])
        else:
            old = heights[pos]
            heights[pos] = py
            poly = lines[pos]
            if poly[-1][0] != px:
                poly.append((px, old))  # East run at the old height
            poly.append((px, py))  # South step
    for pos, h in enumerate(heights):
        if lines[pos][-1][0] != x_max:
            lines[pos].append((x_max, h))
    return [
        HammersleyLine(pos + 1, np.asarray(poly, dtype=np.float64))
        for pos, poly in enumerate(lines)
    ]


def crossing_check(
    cloud: PointCloud,
    ss: SourceSinkSample,
    x: float,
    t: float,
    probes: Sequence[tuple[float, float]] | Iterable[tuple[float, float]],
) -> bool:
    """Verify L(y, s) - L(x, t) <= L_aug(y, s) - L_aug(x, t) on each probe.

    Probes are (y, s) pairs with y >= x and s <= t.  The inequality holds
    deterministically whenever the axis budget at (x, t) is positive; the
    hypothesis is re-checked here and its failure raises HypothesisNotMet
    rather than returning False.
    """
    if z_statistic(cloud, ss, x, t) <= 0.0:
        raise HypothesisNotMet("crossing inequality requires Z > 0 at (x, t)")

    def plain(u: float, v: float) -> int:
        cx, cy = _window_arrays(cloud, u, v)
        return kernels.lnds_length(cy) if len(cy) else 0

    base_plain = plain(x, t)
    base_aug = _augmented_length(cloud, ss, x, t)
    for (py, ps) in probes:
        if py < x or ps > t:
            raise ValueError(f"probe ({py}, {ps}) must satisfy y >= x and s <= t")
        lhs = plain(py, ps) - base_plain
        rhs = _augmented_length(cloud, ss, py, ps) - base_aug
        if lhs > rhs:
            return False
    return True
