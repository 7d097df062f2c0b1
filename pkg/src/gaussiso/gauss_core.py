"""Gaussian integrals in the plane.

Everything here works with the unnormalized weight ``exp(-|x|^2 / 2)``
except the two set functionals, which carry the ``1/(2*pi)`` factor of the
standard Gaussian measure in R^2:

    perimeter(P) = (1/2pi) * int_{dP} exp(-|x|^2/2) dH^1
    measure(P)   = (1/2pi) * int_P   exp(-|x|^2/2) dx
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np
from scipy import integrate, special

from .errors import InvalidPolygon, NonFinite

SQRT_HALF_PI = math.sqrt(math.pi / 2.0)
TWO_PI = 2.0 * math.pi
_SQRT2 = math.sqrt(2.0)

# Intervals shorter than this are integrated by Gauss-Legendre instead of
# differencing erfc values, which would lose relative accuracy.
_SHORT_INTERVAL = 0.5
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


class Point(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-12
    max_depth: int = 200
    truncation_radius: float = 40.0

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if not self.truncation_radius >= 8:
            raise ValueError("truncation_radius must be >= 8")


DEFAULT_QUAD = QuadratureConfig()


class ConvexPolygon:
    """Strictly convex polygon with counterclockwise vertices.

    Vertices are stored as an ``(n, 2)`` float array.  Construction validates
    orientation and strict convexity; use :meth:`from_points` to accept either
    orientation.
    """

    __slots__ = ("vertices",)

    def __init__(self, vertices: Iterable[Sequence[float]]):
        v = np.array([tuple(p) for p in vertices], dtype=float)
        if v.ndim != 2 or v.shape[1] != 2:
            raise InvalidPolygon("vertices must be a sequence of (x, y) pairs")
        check_convex(v)
        v.setflags(write=False)
        self.vertices = v

    @classmethod
    def from_points(cls, vertices: Iterable[Sequence[float]]) -> "ConvexPolygon":
        """Build from vertices in either cyclic orientation."""
        v = np.array([tuple(p) for p in vertices], dtype=float)
        if v.ndim == 2 and v.shape[1] == 2 and len(v) >= 3 and _signed_area(v) < 0:
            v = v[::-1]
        return cls(v)

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return (Point(float(x), float(y)) for x, y in self.vertices)

    def __repr__(self) -> str:
        return f"ConvexPolygon(n={len(self)})"

    def edges(self):
        v = self.vertices
        w = np.roll(v, -1, axis=0)
        return zip(v, w)

    def diameter(self) -> float:
        d = self.vertices[:, None, :] - self.vertices[None, :, :]
        return float(np.sqrt((d ** 2).sum(-1)).max())

    def area(self) -> float:
        return _signed_area(self.vertices)

    def rotated(self, angle: float) -> "ConvexPolygon":
        c, s = math.cos(angle), math.sin(angle)
        rot = np.array([[c, -s], [s, c]])
        return ConvexPolygon(self.vertices @ rot.T)


def _signed_area(v: np.ndarray) -> float:
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def check_convex(v: np.ndarray) -> None:
    """Raise InvalidPolygon unless ``v`` is a strictly convex CCW cycle."""
    n = len(v)
    if n < 3:
        raise InvalidPolygon(f"need at least 3 vertices, got {n}")
    if not np.all(np.isfinite(v)):
        raise InvalidPolygon("vertex coordinates must be finite")
    d = v[:, None, :] - v[None, :, :]
    diam2 = float((d ** 2).sum(-1).max())
    eps = 1e-12 * diam2
    e = np.roll(v, -1, axis=0) - v
    if np.any((e ** 2).sum(1) <= eps):
        raise InvalidPolygon("repeated vertex")
    e_next = np.roll(e, -1, axis=0)
    cross = e[:, 0] * e_next[:, 1] - e[:, 1] * e_next[:, 0]
    if np.any(cross <= eps):
        bad = int(np.argmin(cross))
        raise InvalidPolygon(
            f"not strictly convex counterclockwise at vertex {(bad + 1) % n} "
            f"(cross product {cross[bad]:.3e})"
        )
    # consecutive left turns alone admit star-shaped windings; total turning must be 2pi
    turning = np.arctan2(cross, (e * e_next).sum(1)).sum()
    if abs(turning - TWO_PI) > 1e-6:
        raise InvalidPolygon("vertex cycle winds more than once")


# ---------------------------------------------------------------------------
# one-dimensional primitive


def gauss_integral(a: float, b: float, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Return the integral of exp(-t^2/2) over [a, b] (signed)."""
    if a == b:
        return 0.0
    if a > b:
        return -gauss_integral(b, a, cfg)
    R = cfg.truncation_radius
    if math.isinf(a):
        a = -R
    if math.isinf(b):
        b = R
    if a == b:
        return 0.0
    if a >= 0.0:
        return _gauss_same_sign(a, b)
    if b <= 0.0:
        return _gauss_same_sign(-b, -a)
    return SQRT_HALF_PI * (math.erf(b / _SQRT2) + math.erf(-a / _SQRT2))


def _gauss_same_sign(a: float, b: float) -> float:
    # 0 <= a < b
    if b - a < _SHORT_INTERVAL:
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        t = mid + half * _GL_NODES
        return half * float(np.dot(_GL_WEIGHTS, np.exp(-0.5 * t * t)))
    return SQRT_HALF_PI * (math.erfc(a / _SQRT2) - math.erfc(b / _SQRT2))


# ---------------------------------------------------------------------------
# segments, graphs, polygons


def segment_gaussian_length(p: Sequence[float], q: Sequence[float],
                            cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Unnormalized Gaussian length of the segment [p, q].

    Along ``p + s*u`` with unit ``u`` one has ``|p + s u|^2 = (s + c)^2 + d^2``
    where ``c = p.u`` and ``d = p x u``; the integral is therefore
    ``exp(-d^2/2) * gauss_integral(c, c + |q - p|)``.
    """
    px, py = float(p[0]), float(p[1])
    dx, dy = float(q[0]) - px, float(q[1]) - py
    length = math.hypot(dx, dy)
    if length == 0.0:
        return 0.0
    ux, uy = dx / length, dy / length
    c = px * ux + py * uy
    d = px * uy - py * ux
    return math.exp(-0.5 * d * d) * gauss_integral(c, c + length, cfg)


def polygon_gaussian_perimeter(P: ConvexPolygon, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    if not isinstance(P, ConvexPolygon):
        P = ConvexPolygon(P)
    total = math.fsum(segment_gaussian_length(a, b, cfg) for a, b in P.edges())
    return total / TWO_PI


def graph_gaussian_length(f: Callable[[float], float], fprime: Callable[[float], float],
                          a: float, b: float, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Unnormalized Gaussian length of the graph of ``f`` over [a, b], by quadrature."""
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")

    def integrand(x):
        y = f(x)
        s = fprime(x)
        val = math.exp(-0.5 * (x * x + y * y)) * math.sqrt(1.0 + s * s)
        if not math.isfinite(val):
            raise NonFinite(f"integrand not finite at x={x}")
        return val

    val, _err = integrate.quad(integrand, a, b, epsabs=0.0, epsrel=cfg.rel_tol,
                               limit=cfg.max_depth)
    return val


def segment_as_graph(p: Sequence[float], q: Sequence[float]):
    """Return ``(f, f', a, b)`` describing a non-vertical segment as a graph."""
    (x0, y0), (x1, y1) = p, q
    if x0 == x1:
        raise ValueError("vertical segment is not a graph over x")
    if x0 > x1:
        x0, y0, x1, y1 = x1, y1, x0, y0
    slope = (y1 - y0) / (x1 - x0)
    return (lambda x: y0 + slope * (x - x0)), (lambda x: slope), x0, x1


def polygon_gaussian_perimeter_quad(P: ConvexPolygon, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Same functional as :func:`polygon_gaussian_perimeter`, by adaptive quadrature per edge."""
    total = 0.0
    for p, q in P.edges():
        if abs(q[0] - p[0]) >= abs(q[1] - p[1]):
            f, fp, a, b = segment_as_graph(p, q)
        else:
            # steep edge: parametrize over y (the weight is symmetric in x and y)
            f, fp, a, b = segment_as_graph((p[1], p[0]), (q[1], q[0]))
        total += graph_gaussian_length(f, fp, a, b, cfg)
    return total / TWO_PI


def _origin_triangle_measure(v1: np.ndarray, v2: np.ndarray) -> float:
    """Signed normalized Gaussian measure of the triangle (0, v1, v2).

    Uses the right-triangle decomposition about the foot of the perpendicular
    from the origin: a right triangle with legs ``h`` (from the origin) and
    ``lam`` has measure ``atan(lam/h)/2pi - T(h, lam/h)`` with Owen's T.
    """
    e = v2 - v1
    ell = math.hypot(e[0], e[1])
    ex, ey = e[0] / ell, e[1] / ell
    h = v1[0] * ey - v1[1] * ex
    if h == 0.0:
        return 0.0
    sign = 1.0 if h > 0 else -1.0
    h = abs(h)
    lam1 = v1[0] * ex + v1[1] * ey
    lam2 = lam1 + ell
    part = (math.atan(lam2 / h) - math.atan(lam1 / h)) / TWO_PI
    part -= float(special.owens_t(h, lam2 / h) - special.owens_t(h, lam1 / h))
    return sign * part


def polygon_gaussian_measure(P: ConvexPolygon, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Normalized Gaussian measure of ``P``.

    Signed triangle fan from the origin; each triangle is integrated in closed
    form (radial integral exact, angular integral via Owen's T function).
    """
    if not isinstance(P, ConvexPolygon):
        P = ConvexPolygon(P)
    return math.fsum(_origin_triangle_measure(a, b) for a, b in P.edges())


# degree-5, 7-point rule on the reference triangle (barycentric coordinates, weights sum to 1)
_A1, _B1 = (6 - math.sqrt(15)) / 21, (9 + 2 * math.sqrt(15)) / 21
_A2, _B2 = (6 + math.sqrt(15)) / 21, (9 - 2 * math.sqrt(15)) / 21
_W1, _W2 = (155 - math.sqrt(15)) / 1200, (155 + math.sqrt(15)) / 1200
_BARY = np.array([
    [1 / 3, 1 / 3, 1 / 3],
    [_A1, _A1, _B1], [_A1, _B1, _A1], [_B1, _A1, _A1],
    [_A2, _A2, _B2], [_A2, _B2, _A2], [_B2, _A2, _A2],
])
_BARY_W = np.array([9 / 40, _W1, _W1, _W1, _W2, _W2, _W2])


def _tri_rule(a, b, c) -> float:
    pts = _BARY @ np.array([a, b, c])
    area = 0.5 * abs((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
    vals = np.exp(-0.5 * (pts ** 2).sum(1))
    return area * float(_BARY_W @ vals)


def _tri_adaptive(a, b, c, whole, tol, depth) -> float:
    ab, bc, ca = (a + b) / 2, (b + c) / 2, (c + a) / 2
    kids = [(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)]
    parts = [_tri_rule(*k) for k in kids]
    refined = math.fsum(parts)
    if depth <= 0 or abs(refined - whole) <= tol:
        return refined
    return math.fsum(_tri_adaptive(*k, part, tol / 4, depth - 1) for k, part in zip(kids, parts))


def polygon_gaussian_measure_cubature(P: ConvexPolygon, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Normalized Gaussian measure by a centroid fan and adaptive 7-point cubature.

    Independent of :func:`polygon_gaussian_measure`; slower and only accurate
    to about ``cfg.abs_tol``.
    """
    if not isinstance(P, ConvexPolygon):
        P = ConvexPolygon(P)
    v = P.vertices
    g = v.mean(axis=0)
    tol = cfg.abs_tol * TWO_PI / len(v)
    depth = min(cfg.max_depth, 30)
    total = math.fsum(
        _tri_adaptive(g, a, b, _tri_rule(g, a, b), tol, depth) for a, b in P.edges()
    )
    return total / TWO_PI
