"""Seeded, reproducible sampling of planar Poisson clouds and axis processes.

Count laws are exact (numpy's generator draws Poisson counts by inversion
for small means and by transformed rejection for large ones; no normal
approximation), positions are i.i.d. uniform.  Identical (domain, intensity,
seed) triples give byte-identical clouds within one build.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .geometry import ConvexPolygon, Parallelogram, Rect

__all__ = [
    "PointCloud",
    "SourceSinkSample",
    "child_seed",
    "child_seeds",
    "sample_poisson_rect",
    "sample_poisson_polygon",
    "sample_sources_sinks",
    "dump_cloud_csv",
]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def child_seed(master: int, index: int) -> int:
    """Derive an independent 64-bit substream seed.

    SplitMix64 finalizer applied to master XOR ((index + 1) * golden ratio
    increment), all arithmetic mod 2**64.  Pure, collision-free in practice
    (random 64-bit birthday bound).
    """
    z = (int(master) ^ (((int(index) + 1) * _GOLDEN) & _MASK64)) & _MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK64
    z ^= z >> 31
    return z


def child_seeds(master: int, count: int) -> np.ndarray:
    """Vectorized ``child_seed(master, 0..count-1)`` as uint64."""
    idx = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(master & _MASK64) ^ (idx * np.uint64(_GOLDEN))
        z ^= z >> np.uint64(30)
        z *= np.uint64(0xBF58476D1CE4E5B9)
        z ^= z >> np.uint64(27)
        z *= np.uint64(0x94D049BB133111EB)
        z ^= z >> np.uint64(31)
    return z


@dataclass(frozen=True)
class PointCloud:
    """Finite planar point set with provenance, sorted by (x, then y)."""

    xs: np.ndarray
    ys: np.ndarray
    domain: object
    intensity: float
    seed: int

    def __len__(self) -> int:
        return len(self.xs)

    @property
    def points(self) -> np.ndarray:
        return np.column_stack((self.xs, self.ys))

    @classmethod
    def from_arrays(cls, xs, ys, domain=None, intensity: float = float("nan"), seed: int = 0) -> "PointCloud":
        """Build a finalized (sorted) cloud from raw coordinate arrays."""
        xs = np.asarray(xs, dtype=np.float64)
        ys = np.asarray(ys, dtype=np.float64)
        if xs.shape != ys.shape or xs.ndim != 1:
            raise ValueError("xs and ys must be 1-D arrays of equal length")
        order = np.lexsort((ys, xs))
        return cls(xs[order], ys[order], domain, float(intensity), int(seed))

    def subset(self, mask: np.ndarray) -> "PointCloud":
        """Restriction to a boolean mask; sort order is preserved."""
        return PointCloud(self.xs[mask], self.ys[mask], self.domain, self.intensity, self.seed)


@dataclass(frozen=True)
class SourceSinkSample:
    """Boundary processes: sources on the x-axis, sinks on the y-axis.

    Sources have intensity ``lam``, sinks intensity ``1/lam``; the two are
    independent (distinct substreams of the same seed).
    """

    sources: np.ndarray
    sinks: np.ndarray
    lam: float
    seed: int = 0


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed) & _MASK64)


def sample_poisson_rect(rect: Rect, intensity: float, seed: int) -> PointCloud:
    """Homogeneous Poisson cloud on a rectangle.

    The count is Poisson(intensity * area); a zero-area rectangle or zero
    intensity yields the empty cloud.
    """
    if intensity < 0:
        raise ValueError("intensity must be nonnegative")
    rng = _rng(seed)
    mean = intensity * rect.area
    n = int(rng.poisson(mean)) if mean > 0 else 0
    xs = rng.uniform(rect.x0, rect.x1, n)
    ys = rng.uniform(rect.y0, rect.y1, n)
    order = np.lexsort((ys, xs))
    return PointCloud(xs[order], ys[order], rect, float(intensity), int(seed))


def sample_poisson_polygon(poly: ConvexPolygon | Parallelogram, intensity: float, seed: int) -> PointCloud:
    """Homogeneous Poisson cloud on a convex polygon via rejection.

    A Poisson cloud on the bounding box thinned by membership is again
    Poisson with mean intensity * polygon area, with the count law exact.
    """
    if intensity < 0:
        raise ValueError("intensity must be nonnegative")
    polygon = poly.as_polygon() if isinstance(poly, Parallelogram) else poly
    rng = _rng(seed)
    box = polygon.bbox
    mean = intensity * box.area
    n = int(rng.poisson(mean)) if mean > 0 else 0
    xs = rng.uniform(box.x0, box.x1, n)
    ys = rng.uniform(box.y0, box.y1, n)
    keep = polygon.contains(xs, ys)
    xs, ys = xs[keep], ys[keep]
    order = np.lexsort((ys, xs))
    return PointCloud(xs[order], ys[order], poly, float(intensity), int(seed))


def sample_sources_sinks(x_max: float, y_max: float, lam: float, seed: int) -> SourceSinkSample:
    """Sources ~ Poisson(lam) on [0, x_max], sinks ~ Poisson(1/lam) on [0, y_max].

    Sources and sinks use child substreams 0 and 1 of ``seed``, so they are
    independent of each other and of any cloud drawn from a different child.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    rng_src = _rng(child_seed(seed, 0))
    rng_snk = _rng(child_seed(seed, 1))
    n_src = int(rng_src.poisson(lam * x_max)) if x_max > 0 else 0
    sources = np.sort(rng_src.uniform(0.0, x_max, n_src))
    n_snk = int(rng_snk.poisson(y_max / lam)) if y_max > 0 else 0
    sinks = np.sort(rng_snk.uniform(0.0, y_max, n_snk))
    return SourceSinkSample(sources, sinks, float(lam), int(seed))


def dump_cloud_csv(cloud: PointCloud, path) -> None:
    """Write the cloud as CSV (`x,y` header, 17 significant digits)."""
    path = Path(path)
    with path.open("w", encoding="ascii", newline="\n") as fh:
        fh.write("x,y\n")
        for x, y in zip(cloud.xs.tolist(), cloud.ys.tolist()):
            fh.write(f"{x:.17g},{y:.17g}\n")
