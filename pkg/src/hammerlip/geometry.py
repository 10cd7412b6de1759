"""Closed-form geometry for slope-constrained increasing paths.

This module holds everything that can be evaluated exactly: the slope-band
partial order, the measure-preserving linear map that turns it into the
coordinatewise order, the classification of a box into the three growth
regimes, the limiting length density, the induced parallelogram and its
parameters, and the maximal axis-aligned rectangle inscribed in a
parallelogram (closed form) or in an arbitrary convex polygon (numeric).

All functions are pure; nothing here samples randomness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import DegenerateBand, EmptyFeasible

__all__ = [
    "PlanarPoint",
    "SlopeBand",
    "CaseLabel",
    "AffineMap",
    "Rect",
    "Parallelogram",
    "ConvexPolygon",
    "RectFamily",
    "MaxRectResult",
    "classify",
    "limiting_shape",
    "phi_map",
    "order_holds",
    "problem_parallelogram",
    "max_inscribed_rectangle",
    "max_rectangle_convex",
]


class PlanarPoint(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class SlopeBand:
    """Admissible slope window [alpha, beta] for steps of a chain.

    ``alpha = 0`` and/or ``beta = inf`` are allowed as extended endpoints;
    the pair (0, inf) recovers the classical coordinatewise order.  The
    coupling map only exists for fully finite bands (see :func:`phi_map`).
    """

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        alpha = float(self.alpha)
        beta = float(self.beta)
        if math.isnan(alpha) or math.isnan(beta):
            raise ValueError("slope band endpoints must not be NaN")
        if not (0.0 <= alpha and alpha < beta):
            raise ValueError(f"need 0 <= alpha < beta <= inf, got ({alpha}, {beta})")
        if math.isinf(alpha):
            raise ValueError("alpha must be finite")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def is_finite(self) -> bool:
        """True when 0 < alpha < beta < inf, i.e. the coupling map exists."""
        return self.alpha > 0.0 and math.isfinite(self.beta)

    @property
    def is_classical(self) -> bool:
        """True for the band (0, inf), whose order is plain dominance."""
        return self.alpha == 0.0 and math.isinf(self.beta)

    @property
    def extended(self) -> bool:
        # Derived flag, never stored separately.
        return not math.isfinite(self.beta)

    def slope_arith_mean(self) -> float:
        return math.inf if math.isinf(self.beta) else 0.5 * (self.alpha + self.beta)

    def slope_harm_mean(self) -> float:
        if self.alpha == 0.0:
            return 0.0
        inv_beta = 0.0 if math.isinf(self.beta) else 1.0 / self.beta
        return 2.0 / (inv_beta + 1.0 / self.alpha)


class CaseLabel(Enum):
    SUB = "sub"
    CENTRAL = "central"
    SUPER = "super"


def classify(a: float, b: float, band: SlopeBand) -> CaseLabel:
    """Growth regime of the box [0, a] x [0, b] under ``band``.

    Super when b/a exceeds the arithmetic mean of the band, Sub when it is
    below the harmonic mean, Central otherwise.  Boundary equalities count
    as Central (the middle regime is the closed one).
    """
    if not (a > 0 and b > 0):
        raise ValueError("box sides must be positive")
    ratio = b / a
    if ratio > band.slope_arith_mean():
        return CaseLabel.SUPER
    if ratio < band.slope_harm_mean():
        return CaseLabel.SUB
    return CaseLabel.CENTRAL


def limiting_shape(a: float, b: float, band: SlopeBand) -> float:
    """Almost-sure limit of (longest chain in [0, at] x [0, bt]) / t.

    Piecewise in the regime of (a, b):

    * Super:    a * sqrt(beta - alpha)
    * Central:  2 * sqrt((beta*a - b) * (b - a*alpha) / (beta - alpha))
    * Sub:      b * sqrt(1/alpha - 1/beta)

    Extended endpoints take the analytic limits of these formulas, e.g.
    (alpha, beta) = (0, inf) gives 2 * sqrt(a*b) and a Central band with
    beta = inf gives 2 * sqrt(a * (b - a*alpha)).
    """
    case = classify(a, b, band)
    alpha, beta = band.alpha, band.beta
    if case is CaseLabel.SUPER:
        # Super is unreachable when beta = inf (arith mean is inf), so beta
        # is finite here.
        return a * math.sqrt(beta - alpha)
    if case is CaseLabel.SUB:
        if alpha == 0.0:
            raise RuntimeError("internal: Sub classification with alpha = 0 is impossible")
        inv_beta = 0.0 if math.isinf(beta) else 1.0 / beta
        return b * math.sqrt(1.0 / alpha - inv_beta)
    # Central.  Clamp tiny negative products arising from rounding exactly
    # at the regime thresholds.
    if math.isinf(beta):
        return 2.0 * math.sqrt(max(a * (b - a * alpha), 0.0))
    return 2.0 * math.sqrt(max((beta * a - b) * (b - a * alpha), 0.0) / (beta - alpha))


@dataclass(frozen=True)
class AffineMap:
    """Linear map of the plane, row-major 2x2 coefficients."""

    m11: float
    m12: float
    m21: float
    m22: float

    @property
    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m21

    def apply(self, x: float, y: float) -> PlanarPoint:
        return PlanarPoint(self.m11 * x + self.m12 * y, self.m21 * x + self.m22 * y)

    def apply_to(self, xs: np.ndarray, ys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        xs = np.asarray(xs, dtype=np.float64)
        ys = np.asarray(ys, dtype=np.float64)
        return self.m11 * xs + self.m12 * ys, self.m21 * xs + self.m22 * ys


def phi_map(band: SlopeBand) -> AffineMap:
    """Determinant-one map sending a band order to plain dominance.

    Directions of slope ``alpha`` become horizontal and directions of slope
    ``beta`` become vertical, so a band-ordered pair maps to a coordinatewise
    dominated pair and conversely.  Only finite bands are accepted: at
    alpha = 0 or beta = inf the coefficients degenerate to 0/inf and callers
    must use the classical-order route instead.
    """
    if not band.is_finite:
        raise DegenerateBand(f"coupling map needs 0 < alpha < beta < inf, got {band}")
    alpha, beta = band.alpha, band.beta
    k = (alpha * beta) ** 0.25 / math.sqrt(beta - alpha)
    sa, sb = math.sqrt(alpha), math.sqrt(beta)
    return AffineMap(k * sb, -k / sb, -k * sa, k / sa)


def order_holds(p: Sequence[float], q: Sequence[float], band: SlopeBand) -> bool:
    """Whether p precedes q in the slope-band order.

    For dx > 0 the step slope dy/dx must lie in [alpha, beta] (evaluated
    multiplicatively as alpha*dx <= dy <= beta*dx).  Zero horizontal
    displacement is allowed only for beta = inf with dy >= 0; in particular
    p never precedes itself under a finite band.
    """
    px, py = float(p[0]), float(p[1])
    qx, qy = float(q[0]), float(q[1])
    dx = qx - px
    if dx < 0.0:
        return False
    dy = qy - py
    if dx == 0.0:
        return math.isinf(band.beta) and dy >= 0.0
    return band.alpha * dx <= dy <= band.beta * dx


# ---------------------------------------------------------------------------
# Rectangles, parallelograms, polygons
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Rect:
    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self) -> None:
        if not (self.x0 <= self.x1 and self.y0 <= self.y1):
            raise ValueError("need x0 <= x1 and y0 <= y1")

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def area(self) -> float:
        return self.width * self.height

    def translated(self, dx: float, dy: float) -> "Rect":
        return Rect(self.x0 + dx, self.x1 + dx, self.y0 + dy, self.y1 + dy)

    def corners(self) -> list[PlanarPoint]:
        return [
            PlanarPoint(self.x0, self.y0),
            PlanarPoint(self.x1, self.y0),
            PlanarPoint(self.x1, self.y1),
            PlanarPoint(self.x0, self.y1),
        ]


@dataclass(frozen=True)
class Parallelogram:
    """Image of a box under the coupling map, anchored at the origin.

    Vertices: P = c*(-1, mu), Q = (0, 0), R = cprime*(mu, -1) and
    S = (sigma, rho) with sigma = -c + cprime*mu and rho = -cprime + c*mu.
    Both side directions have negative slope (-mu and -1/mu), which is what
    makes dominating point pairs span rectangles inside the parallelogram.
    """

    c: float
    cprime: float
    mu: float
    sigma: float
    rho: float

    def __post_init__(self) -> None:
        if not (self.c > 0 and self.cprime > 0):
            raise ValueError("c and cprime must be positive")
        if not self.mu > 1.0:
            raise ValueError("mu must exceed 1")
        if abs(self.sigma - (-self.c + self.cprime * self.mu)) > 1e-12 * max(1.0, abs(self.sigma)):
            raise ValueError("sigma does not match -c + cprime*mu")
        if abs(self.rho - (-self.cprime + self.c * self.mu)) > 1e-12 * max(1.0, abs(self.rho)):
            raise ValueError("rho does not match -cprime + c*mu")
        if self.sigma < 0 and self.rho < 0:
            # impossible while mu > 1
            raise ValueError("sigma and rho cannot both be negative")

    @classmethod
    def from_c_cprime(cls, c: float, cprime: float, mu: float) -> "Parallelogram":
        return cls(c, cprime, mu, -c + cprime * mu, -cprime + c * mu)

    @classmethod
    def from_sigma_rho(cls, sigma: float, rho: float, mu: float) -> "Parallelogram":
        denom = mu * mu - 1.0
        c = (rho * mu + sigma) / denom
        cprime = (sigma * mu + rho) / denom
        return cls(c, cprime, mu, sigma, rho)

    @property
    def P(self) -> PlanarPoint:
        return PlanarPoint(-self.c, self.c * self.mu)

    @property
    def Q(self) -> PlanarPoint:
        return PlanarPoint(0.0, 0.0)

    @property
    def R(self) -> PlanarPoint:
        return PlanarPoint(self.cprime * self.mu, -self.cprime)

    @property
    def S(self) -> PlanarPoint:
        return PlanarPoint(self.sigma, self.rho)

    @property
    def diameter(self) -> float:
        # |PR| is the longer diagonal for these orientations; take the max
        # of both to be safe.
        p, q, r, s = self.P, self.Q, self.R, self.S
        return max(math.dist(p, r), math.dist(q, s))

    def scaled(self, t: float) -> "Parallelogram":
        return Parallelogram(self.c * t, self.cprime * t, self.mu, self.sigma * t, self.rho * t)

    def as_polygon(self) -> "ConvexPolygon":
        # P -> Q -> R -> S is counterclockwise.
        return ConvexPolygon(np.array([self.P, self.Q, self.R, self.S], dtype=np.float64))

    def contains(self, xs, ys, tol: float = 0.0) -> np.ndarray:
        return self.as_polygon().contains(xs, ys, tol)


def problem_parallelogram(a: float, b: float, band: SlopeBand) -> Parallelogram:
    """Parallelogram parameters of the mapped box [0, a] x [0, b].

    c      = alpha^(1/4) * beta^(-1/4) * b / sqrt(beta - alpha)
    cprime = beta^(1/4) * alpha^(3/4) * a / sqrt(beta - alpha)
    mu     = sqrt(beta / alpha)

    In the Central regime 2*sqrt(sigma*rho) equals :func:`limiting_shape`.
    """
    if not (a > 0 and b > 0):
        raise ValueError("box sides must be positive")
    if not band.is_finite:
        raise DegenerateBand(f"parallelogram parameters need a finite band, got {band}")
    alpha, beta = band.alpha, band.beta
    root = math.sqrt(beta - alpha)
    c = alpha**0.25 * beta**-0.25 * b / root
    cprime = beta**0.25 * alpha**0.75 * a / root
    mu = math.sqrt(beta / alpha)
    return Parallelogram.from_c_cprime(c, cprime, mu)


@dataclass(frozen=True)
class RectFamily:
    """Translation family of maximizing rectangles: base + u * direction.

    ``u`` ranges over [0, u_max]; the family is a singleton iff u_max = 0.
    """

    base: Rect
    direction: tuple[float, float]
    u_max: float

    @property
    def is_singleton(self) -> bool:
        return self.u_max == 0.0

    def member(self, u: float) -> Rect:
        if not 0.0 <= u <= self.u_max + 1e-15:
            raise ValueError(f"family parameter {u} outside [0, {self.u_max}]")
        return self.base.translated(u * self.direction[0], u * self.direction[1])


class MaxRectResult(NamedTuple):
    area: float
    witness: Rect
    family: RectFamily


def max_inscribed_rectangle(par: Parallelogram) -> MaxRectResult:
    """Largest axis-aligned rectangle inside the parallelogram, exactly.

    Three cases on rho versus sigma/mu and mu*sigma:

    * rho < sigma/mu:  area (rho*mu + sigma)^2 / (4*mu), witness
      [0, mu*xi] x [0, xi] with xi = (rho*mu + sigma) / (2*mu), and every
      translate by u*(mu, -1) with u in [0, (sigma - mu*rho)/(2*mu)] ties.
    * rho > mu*sigma:  the mirror case (swap the roles of the axes).
    * otherwise:       the unique maximizer is [0, sigma] x [0, rho] with
      area sigma*rho.

    The first two cases subsume sigma < 0 or rho < 0 (at most one of them
    can be negative).
    """
    sigma, rho, mu = par.sigma, par.rho, par.mu
    if rho * mu < sigma:  # rho < sigma/mu, multiplicative to dodge division
        xi = (rho * mu + sigma) / (2.0 * mu)
        area = (rho * mu + sigma) ** 2 / (4.0 * mu)
        witness = Rect(0.0, mu * xi, 0.0, xi)
        family = RectFamily(witness, (mu, -1.0), (sigma - mu * rho) / (2.0 * mu))
        return MaxRectResult(area, witness, family)
    if rho > mu * sigma:
        xi = (sigma * mu + rho) / (2.0 * mu)
        area = (sigma * mu + rho) ** 2 / (4.0 * mu)
        witness = Rect(0.0, xi, 0.0, mu * xi)
        family = RectFamily(witness, (-1.0, mu), (rho - mu * sigma) / (2.0 * mu))
        return MaxRectResult(area, witness, family)
    witness = Rect(0.0, sigma, 0.0, rho)
    return MaxRectResult(sigma * rho, witness, RectFamily(witness, (0.0, 0.0), 0.0))


# ---------------------------------------------------------------------------
# Convex polygons and the numeric optimizer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvexPolygon:
    """Strictly convex polygon, vertices counterclockwise."""

    vertices: np.ndarray

    def __post_init__(self) -> None:
        verts = np.asarray(self.vertices, dtype=np.float64)
        if verts.ndim != 2 or verts.shape[1] != 2 or verts.shape[0] < 3:
            raise ValueError("need at least 3 planar vertices")
        m = verts.shape[0]
        for i in range(m):
            a = verts[i]
            b = verts[(i + 1) % m]
            c = verts[(i + 2) % m]
            cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
            if cross <= 0:
                raise ValueError("vertices must be strictly convex in counterclockwise order")
        object.__setattr__(self, "vertices", verts)

    @classmethod
    def from_rect(cls, rect: Rect) -> "ConvexPolygon":
        return cls(np.array([(rect.x0, rect.y0), (rect.x1, rect.y0), (rect.x1, rect.y1), (rect.x0, rect.y1)]))

    @property
    def area(self) -> float:
        x = self.vertices[:, 0]
        y = self.vertices[:, 1]
        return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    @property
    def diameter(self) -> float:
        v = self.vertices
        d2 = np.sum((v[:, None, :] - v[None, :, :]) ** 2, axis=-1)
        return float(np.sqrt(d2.max()))

    @property
    def bbox(self) -> Rect:
        v = self.vertices
        return Rect(float(v[:, 0].min()), float(v[:, 0].max()), float(v[:, 1].min()), float(v[:, 1].max()))

    def edges(self) -> list[tuple[np.ndarray, np.ndarray]]:
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def contains(self, xs, ys, tol: float = 0.0) -> np.ndarray:
        """Half-plane membership test; ``tol`` is an absolute slack."""
        xs = np.asarray(xs, dtype=np.float64)
        ys = np.asarray(ys, dtype=np.float64)
        inside = np.ones(np.broadcast(xs, ys).shape, dtype=bool)
        v = self.vertices
        m = len(v)
        for i in range(m):
            ax, ay = v[i]
            bx, by = v[(i + 1) % m]
            inside &= (bx - ax) * (ys - ay) - (by - ay) * (xs - ax) >= -tol
        return inside

    def contains_point(self, p: Sequence[float], tol: float = 0.0) -> bool:
        return bool(self.contains(np.float64(p[0]), np.float64(p[1]), tol))

    def xrange_at(self, y: float) -> tuple[float, float] | None:
        """Horizontal cross-section [xlo, xhi] at height y, or None."""
        xs: list[float] = []
        for a, b in self.edges():
            ay, by = a[1], b[1]
            if ay == by:
                if ay == y:
                    xs.extend((float(a[0]), float(b[0])))
                continue
            s = (y - ay) / (by - ay)
            if 0.0 <= s <= 1.0:
                xs.append(float(a[0] + s * (b[0] - a[0])))
        if not xs:
            return None
        return min(xs), max(xs)

    def yrange_at(self, x: float) -> tuple[float, float] | None:
        ys: list[float] = []
        for a, b in self.edges():
            ax, bx = a[0], b[0]
            if ax == bx:
                if ax == x:
                    ys.extend((float(a[1]), float(b[1])))
                continue
            s = (x - ax) / (bx - ax)
            if 0.0 <= s <= 1.0:
                ys.append(float(a[1] + s * (b[1] - a[1])))
        if not ys:
            return None
        return min(ys), max(ys)

    def boundary_points(self, n: int) -> np.ndarray:
        """n points spread along the boundary by arc length, vertices included."""
        v = self.vertices
        m = len(v)
        seg = np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1)
        cum = np.concatenate(([0.0], np.cumsum(seg)))
        total = cum[-1]
        ts = np.linspace(0.0, total, num=max(n, m), endpoint=False)
        pts = np.empty((len(ts), 2))
        idx = np.minimum(np.searchsorted(cum, ts, side="right") - 1, m - 1)
        for j, (t, i) in enumerate(zip(ts, idx)):
            frac = (t - cum[i]) / seg[i] if seg[i] > 0 else 0.0
            pts[j] = v[i] + frac * (v[(i + 1) % m] - v[i])
        return np.vstack((pts, v))


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(f: Callable[[float], float], lo: float, hi: float, iters: int = 72) -> tuple[float, float]:
    """Golden-section maximization on [lo, hi]; also checks the endpoints."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    best_x = max((lo, hi, c, d), key=f)
    return best_x, f(best_x)


def _feasible_interval(lo: float, hi: float, constraints: list[tuple[float, float]]) -> tuple[float, float] | None:
    """Intersect [lo, hi] with linear constraints coef*s <= bound."""
    for coef, bound in constraints:
        if coef > 0:
            hi = min(hi, bound / coef)
        elif coef < 0:
            lo = max(lo, bound / coef)
        elif bound < 0:
            return None
    if lo > hi:
        return None
    return lo, hi


def _best_point_on_boundary(
    poly: ConvexPolygon,
    other: np.ndarray,
    lower: bool,
    current: np.ndarray,
    current_area: float,
) -> tuple[np.ndarray, float]:
    """Best boundary position for one endpoint of a dominating pair.

    ``lower`` selects whether the moving point must stay coordinatewise
    below ``other`` (it is the pair minimum) or above it.  The area along
    each edge is a quadratic of the edge parameter, so a golden-section
    pass per edge plus the endpoints finds the per-edge optimum.
    """
    best_pt, best_area = current, current_area
    ox, oy = float(other[0]), float(other[1])
    for a, b in poly.edges():
        dx, dy = float(b[0] - a[0]), float(b[1] - a[1])
        if lower:
            constraints = [(dx, ox - float(a[0])), (dy, oy - float(a[1]))]
        else:
            constraints = [(-dx, float(a[0]) - ox), (-dy, float(a[1]) - oy)]
        span = _feasible_interval(0.0, 1.0, constraints)
        if span is None:
            continue

        if lower:
            def area_at(s: float) -> float:
                return (ox - (a[0] + s * dx)) * (oy - (a[1] + s * dy))
        else:
            def area_at(s: float) -> float:
                return ((a[0] + s * dx) - ox) * ((a[1] + s * dy) - oy)

        s_best, val = _golden_max(area_at, span[0], span[1])
        if val > best_area:
            best_area = val
            best_pt = np.array([a[0] + s_best * dx, a[1] + s_best * dy])
    return best_pt, best_area


def _coordinate_pass(poly: ConvexPolygon, p: np.ndarray, q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """One round of coordinate-wise golden-section on (u, v, u', v')."""
    p = p.copy()
    q = q.copy()

    span = poly.xrange_at(p[1])
    if span is not None:
        lo, hi = span[0], min(span[1], q[0])
        if lo <= hi:
            p[0], _ = _golden_max(lambda u: (q[0] - u) * (q[1] - p[1]), lo, hi)
    span = poly.yrange_at(p[0])
    if span is not None:
        lo, hi = span[0], min(span[1], q[1])
        if lo <= hi:
            p[1], _ = _golden_max(lambda v: (q[0] - p[0]) * (q[1] - v), lo, hi)
    span = poly.xrange_at(q[1])
    if span is not None:
        lo, hi = max(span[0], p[0]), span[1]
        if lo <= hi:
            q[0], _ = _golden_max(lambda u: (u - p[0]) * (q[1] - p[1]), lo, hi)
    span = poly.yrange_at(q[0])
    if span is not None:
        lo, hi = max(span[0], p[1]), span[1]
        if lo <= hi:
            q[1], _ = _golden_max(lambda v: (q[0] - p[0]) * (v - p[1]), lo, hi)
    return p, q


def max_rectangle_convex(
    poly: ConvexPolygon, resolution: int = 512, refine_rounds: int = 20
) -> tuple[float, tuple[PlanarPoint, PlanarPoint]]:
    """Approximate sup of 2*sqrt((u'-u) * (v'-v)) over dominating pairs in D.

    Grid search over boundary samples picks the basin, then ``refine_rounds``
    rounds alternate a per-edge slide of each endpoint (the optimum pair
    lies on the boundary) with the coordinate-wise golden-section pass.
    The returned value is a lower bound of the true supremum and converges
    as the resolution grows.
    """
    if resolution < 8:
        raise ValueError("resolution must be at least 8")
    pts = poly.boundary_points(resolution)
    n = len(pts)
    xs = pts[:, 0]
    ys = pts[:, 1]

    best_area = -math.inf
    best_pair: tuple[int, int] | None = None
    chunk = 1024
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        dx = xs[None, start:stop] - xs[:, None]
        dy = ys[None, start:stop] - ys[:, None]
        areas = np.where((dx >= 0) & (dy >= 0), dx * dy, -math.inf)
        flat = int(np.argmax(areas))
        i, j = divmod(flat, stop - start)
        if areas[i, j] > best_area:
            best_area = float(areas[i, j])
            best_pair = (i, start + j)
    if best_pair is None or best_area == -math.inf:
        raise EmptyFeasible("no dominating point pair inside the polygon")

    p = pts[best_pair[0]].copy()
    q = pts[best_pair[1]].copy()
    area = max(best_area, 0.0)
    for _ in range(refine_rounds):
        p, area = _best_point_on_boundary(poly, q, lower=True, current=p, current_area=area)
        q, area = _best_point_on_boundary(poly, p, lower=False, current=q, current_area=area)
        p2, q2 = _coordinate_pass(poly, p, q)
        area2 = (q2[0] - p2[0]) * (q2[1] - p2[1])
        if area2 > area:
            p, q, area = p2, q2, area2
    return 2.0 * math.sqrt(max(area, 0.0)), (PlanarPoint(*p), PlanarPoint(*q))
