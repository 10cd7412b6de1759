"""Longest-chain computation.

Fast O(n log n) engine for the classical coordinatewise order (patience
piles on y after the (x, y) sort), the slope-band variant routed through
the coupling map, a quadratic brute-force oracle, path recovery and the
optimal support (union of all maximizing chains).

Convention: dominance is non-strict (ties chain), so axis-aligned boundary
points can follow each other; interior Poisson points almost surely have
distinct coordinates, so this never changes bulk results.  Under a finite
band, comparability requires strictly increasing x (a vertical step has no
slope).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from . import kernels
from .errors import SizeLimit
from .geometry import ConvexPolygon, Parallelogram, Rect, SlopeBand, phi_map
from .sampler import PointCloud

__all__ = [
    "ChainResult",
    "longest_chain_standard",
    "longest_chain_lipschitz",
    "longest_chain_bruteforce",
    "longest_chain_in_polygon",
    "optimal_support",
    "order_matrix",
]


@dataclass(frozen=True)
class ChainResult:
    """Chain length plus one recovered maximizing path (chain order)."""

    length: int
    path: np.ndarray  # (length, 2)


_EMPTY = np.empty((0, 2), dtype=np.float64)


def _chain_on_sorted(xs: np.ndarray, ys: np.ndarray) -> ChainResult:
    if len(xs) == 0:
        return ChainResult(0, _EMPTY)
    k, prev, last = kernels.lnds_path(ys)
    idx = kernels.walk_path(prev, last, k)
    return ChainResult(k, np.column_stack((xs[idx], ys[idx])))


def longest_chain_standard(cloud: PointCloud) -> ChainResult:
    """Longest non-strictly dominating chain; assumes the cloud is finalized."""
    return _chain_on_sorted(cloud.xs, cloud.ys)


def longest_chain_length(cloud: PointCloud) -> int:
    """Length only; skips path recovery (hot path for the Monte Carlo runs)."""
    return kernels.lnds_length(cloud.ys)


def longest_chain_lipschitz(cloud: PointCloud, band: SlopeBand) -> ChainResult:
    """Longest slope-band chain, via the coupling map for finite bands.

    The cloud is mapped, re-sorted in image coordinates and fed to the
    standard engine; the recovered path is returned in original
    coordinates.  The classical band routes directly to
    :func:`longest_chain_standard`; half-extended bands raise
    ``DegenerateBand`` (no coupling map exists).
    """
    if band.is_classical:
        return longest_chain_standard(cloud)
    mapping = phi_map(band)  # raises DegenerateBand when not finite
    tx, ty = mapping.apply_to(cloud.xs, cloud.ys)
    order = np.lexsort((ty, tx))
    ty_sorted = ty[order]
    if len(ty_sorted) == 0:
        return ChainResult(0, _EMPTY)
    k, prev, last = kernels.lnds_path(ty_sorted)
    idx = order[kernels.walk_path(prev, last, k)]
    return ChainResult(k, np.column_stack((cloud.xs[idx], cloud.ys[idx])))


def longest_chain_lipschitz_length(cloud: PointCloud, band: SlopeBand) -> int:
    if band.is_classical:
        return kernels.lnds_length(cloud.ys)
    tx, ty = phi_map(band).apply_to(cloud.xs, cloud.ys)
    return kernels.lnds_length(ty[np.lexsort((ty, tx))])


def order_matrix(xs: np.ndarray, ys: np.ndarray, band: SlopeBand) -> np.ndarray:
    """M[i, j] = point i precedes point j in the band order (vectorized).

    Finite bands require dx > 0; the classical band uses non-strict
    dominance; a finite-alpha band with beta = inf additionally allows
    vertical steps upward.
    """
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    dx = xs[None, :] - xs[:, None]
    dy = ys[None, :] - ys[:, None]
    if band.is_classical:
        return (dx >= 0) & (dy >= 0)
    if np.isinf(band.beta):
        vertical = (dx == 0) & (dy >= 0)
        return vertical | ((dx > 0) & (band.alpha * dx <= dy))
    return (dx > 0) & (band.alpha * dx <= dy) & (dy <= band.beta * dx)


OrderSpec = Union[SlopeBand, np.ndarray, Callable[[np.ndarray, np.ndarray], np.ndarray]]

_BRUTE_LIMIT = 5000


def longest_chain_bruteforce(cloud: PointCloud, order: OrderSpec) -> int:
    """Exact longest-chain length by quadratic DP over the comparability DAG.

    ``order`` is a SlopeBand, a precomputed boolean matrix M[i, j] = (i
    precedes j), or a callable (xs, ys) -> matrix.  Points must be sorted
    by (x, then y) so that index order is a topological order.  Refuses
    more than 5000 points.
    """
    xs, ys = cloud.xs, cloud.ys
    n = len(xs)
    if n > _BRUTE_LIMIT:
        raise SizeLimit(f"brute force limited to {_BRUTE_LIMIT} points, got {n}")
    if n == 0:
        return 0
    if isinstance(order, SlopeBand):
        mat = order_matrix(xs, ys, order)
    elif callable(order):
        mat = np.asarray(order(xs, ys), dtype=bool)
    else:
        mat = np.asarray(order, dtype=bool)
    dp = np.zeros(n, dtype=np.int64)
    for j in range(n):
        elig = mat[:j, j]
        dp[j] = 1 + (dp[:j][elig].max() if elig.any() else 0)
    return int(dp.max())


def longest_chain_in_polygon(cloud: PointCloud, poly: ConvexPolygon | Parallelogram | Rect) -> ChainResult:
    """Standard chain over the points of the cloud lying in ``poly``."""
    if isinstance(poly, Rect):
        keep = (
            (cloud.xs >= poly.x0)
            & (cloud.xs <= poly.x1)
            & (cloud.ys >= poly.y0)
            & (cloud.ys <= poly.y1)
        )
    else:
        polygon = poly.as_polygon() if isinstance(poly, Parallelogram) else poly
        keep = polygon.contains(cloud.xs, cloud.ys)
    return _chain_on_sorted(cloud.xs[keep], cloud.ys[keep])


def _support_on_sorted(ys: np.ndarray) -> tuple[int, np.ndarray]:
    """Mask of elements lying on at least one maximum chain.

    Forward heights give the best chain ending at each element; the best
    chain starting there is a forward pass on the reversed, negated values.
    An element is in the support iff the two meet the global length.
    """
    n = len(ys)
    if n == 0:
        return 0, np.zeros(0, dtype=bool)
    k, fwd = kernels.lnds_heights(ys)
    _, bwd_rev = kernels.lnds_heights(-ys[::-1])
    bwd = bwd_rev[::-1]
    return k, fwd + bwd - 1 == k


def optimal_support(cloud: PointCloud, band: SlopeBand | None = None) -> np.ndarray:
    """Indices (into the cloud) of points on some maximizing chain.

    With a finite ``band`` the support is computed in image coordinates and
    mapped back; with None or the classical band it is computed directly.
    """
    if band is None or band.is_classical:
        _, mask = _support_on_sorted(cloud.ys)
        return np.flatnonzero(mask)
    tx, ty = phi_map(band).apply_to(cloud.xs, cloud.ys)
    order = np.lexsort((ty, tx))
    _, mask = _support_on_sorted(ty[order])
    return np.sort(order[mask])
