"""Set classes: regular polygons, quadrilaterals with vertices on the axes,
and convex sets bounded by two concave caps (piecewise linear).

Also the plain-text shape format used by the CLI::

    # polygon: one vertex per line
    1.0 0.0
    0.0 1.0
    -1.0 0.0

    # C-class set: two knot lists, each introduced by its keyword
    upper
    -1 0
    0 0.5
    2 0
    lower
    -1 0
    0 0.25
    2 0
"""
from __future__ import annotations

import io
import math
import os
from dataclasses import dataclass
from typing import Sequence, TextIO

import numpy as np

from .errors import DomainError, InvalidCClass, InvalidPolygon
from .gauss_core import TWO_PI, ConvexPolygon, segment_gaussian_length
from .special import I_func, SideParams, side_to_alphabeta


def regular_ngon(n: int, r: float) -> ConvexPolygon:
    """Regular n-gon of circumradius r centred at 0, one vertex on the positive x-axis."""
    if int(n) != n or n < 3:
        raise DomainError(f"n must be an integer >= 3, got {n}")
    if not r > 0:
        raise DomainError(f"r must be positive, got {r}")
    k = np.arange(n)
    theta = TWO_PI * k / n
    return ConvexPolygon(np.column_stack([r * np.cos(theta), r * np.sin(theta)]))


# ---------------------------------------------------------------------------
# quadrilaterals with one vertex on each semiaxis


@dataclass(frozen=True)
class QuadT:
    """Quadrilateral with vertices (p,0), (0,q), (-r,0), (0,-s)."""

    p: float
    q: float
    r: float
    s: float

    def __post_init__(self):
        for name in ("p", "q", "r", "s"):
            val = getattr(self, name)
            if not (val > 0 and math.isfinite(val)):
                raise DomainError(f"{name} must be positive and finite, got {val}")
        # convexity is automatic for positive parameters; the cross products are pq, qr, rs, sp
        assert min(self.p * self.q, self.q * self.r, self.r * self.s, self.s * self.p) > 0

    def vertices(self) -> list[tuple[float, float]]:
        return [(self.p, 0.0), (0.0, self.q), (-self.r, 0.0), (0.0, -self.s)]

    def polygon(self) -> ConvexPolygon:
        return ConvexPolygon(self.vertices())

    def sides(self) -> list[SideParams]:
        """The four sides as (height, base) pairs, counterclockwise from the first quadrant."""
        return [SideParams(self.q, self.p), SideParams(self.q, self.r),
                SideParams(self.s, self.r), SideParams(self.s, self.p)]


def rhombus_Tn(n: int) -> QuadT:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return QuadT(float(n), 1.0 / n, float(n), 1.0 / n)


def quad_perimeter(t: QuadT) -> float:
    """Normalized Gaussian perimeter, summing I(alpha, beta) over the four sides."""
    return math.fsum(I_func(side_to_alphabeta(s)) for s in t.sides()) / TWO_PI


def sample_quadT(seed: int, count: int) -> list[QuadT]:
    """Log-uniform samples on [1e-3, 1e3]^4."""
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    vals = 10.0 ** rng.uniform(-3.0, 3.0, size=(count, 4))
    return [QuadT(*map(float, row)) for row in vals]


# ---------------------------------------------------------------------------
# C-class sets


@dataclass(frozen=True)
class CClassSet:
    """{(x, y): a <= x <= b, -lower(x) <= y <= upper(x)} with piecewise-linear caps.

    ``upper`` and ``lower`` are knot lists ``[(x, y), ...]`` sorted by x,
    both running from ``a`` to ``b``.  ``lower`` holds the depth below the
    x-axis, so both caps are non-negative concave functions.
    """

    upper: tuple[tuple[float, float], ...]
    lower: tuple[tuple[float, float], ...]

    @property
    def a(self) -> float:
        return self.upper[0][0]

    @property
    def b(self) -> float:
        return self.upper[-1][0]

    @classmethod
    def from_knots(cls, upper: Sequence[Sequence[float]], lower: Sequence[Sequence[float]]) -> "CClassSet":
        return cls(tuple((float(x), float(y)) for x, y in upper),
                   tuple((float(x), float(y)) for x, y in lower))

    @classmethod
    def from_quad(cls, t: QuadT) -> "CClassSet":
        return cls.from_knots([(-t.r, 0.0), (0.0, t.q), (t.p, 0.0)],
                              [(-t.r, 0.0), (0.0, t.s), (t.p, 0.0)])

    def boundary_segments(self):
        """Yield (start, end) points of every boundary piece; lower cap mirrored below the axis."""
        for (x0, y0), (x1, y1) in zip(self.upper, self.upper[1:]):
            yield (x0, y0), (x1, y1)
        for (x0, y0), (x1, y1) in zip(self.lower, self.lower[1:]):
            yield (x0, -y0), (x1, -y1)


@dataclass(frozen=True)
class Validation:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _cap_problem(knots, a, b, name, tol) -> str:
    if len(knots) < 2:
        return f"{name}: need at least two knots"
    xs = np.array([k[0] for k in knots])
    ys = np.array([k[1] for k in knots])
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
        return f"{name}: non-finite knot"
    if xs[0] != a or xs[-1] != b:
        return f"{name}: knots must span [a, b]"
    if np.any(np.diff(xs) <= 0):
        return f"{name}: knot abscissae must be strictly increasing"
    scale = max(1.0, float(ys.max()))
    if abs(ys[0]) > tol * scale or abs(ys[-1]) > tol * scale:
        return f"{name}: cap must vanish at the endpoints"
    if np.any(ys < -tol * scale):
        return f"{name}: cap must be non-negative"
    slopes = np.diff(ys) / np.diff(xs)
    if np.any(np.diff(slopes) > tol * max(1.0, float(np.abs(slopes).max()))):
        return f"{name}: cap is not concave"
    peak = float(np.interp(0.0, xs, ys))
    if ys.max() > peak + tol * scale:
        return f"{name}: maximum not attained at x = 0"
    return ""


def cclass_validate(c: CClassSet, tol: float = 1e-12) -> Validation:
    """Check every C-class invariant; the first violated one is reported in ``reason``."""
    try:
        a, b = c.upper[0][0], c.upper[-1][0]
    except (IndexError, TypeError):
        return Validation(False, "upper: need at least two knots")
    if not (a < 0 < b):
        return Validation(False, f"need a < 0 < b, got a={a}, b={b}")
    for knots, name in ((c.upper, "upper"), (c.lower, "lower")):
        msg = _cap_problem(knots, a, b, name, tol)
        if msg:
            return Validation(False, msg)
    if max(k[1] for k in c.upper) + max(k[1] for k in c.lower) <= 0:
        return Validation(False, "set has empty interior")
    return Validation(True)


def cclass_perimeter(c: CClassSet) -> float:
    check = cclass_validate(c)
    if not check:
        raise InvalidCClass(check.reason)
    return math.fsum(segment_gaussian_length(p, q) for p, q in c.boundary_segments()) / TWO_PI


def _split_at_zero(knots):
    xs = np.array([k[0] for k in knots])
    ys = np.array([k[1] for k in knots])
    y0 = float(np.interp(0.0, xs, ys))
    left = [(x, y) for x, y in knots if x < 0] + [(0.0, y0)]
    right = [(0.0, y0)] + [(x, y) for x, y in knots if x > 0]
    return left, right, y0


def cclass_quadrant_arcs(c: CClassSet):
    """Split the boundary into its four quadrant arcs.

    Returns a list of ``(J, height, half_width)`` where ``J`` is the
    unnormalized Gaussian length of the arc, ``height`` the cap value at 0
    and ``half_width`` the distance from 0 to the arc's x-axis endpoint.
    """
    out = []
    for knots, sign in ((c.upper, 1.0), (c.lower, -1.0)):
        left, right, y0 = _split_at_zero(knots)
        for arc, width in ((right, c.b), (left, -c.a)):
            J = math.fsum(segment_gaussian_length((x0, sign * y0_), (x1, sign * y1))
                          for (x0, y0_), (x1, y1) in zip(arc, arc[1:]))
            out.append((J, y0, width))
    return out


def _concave_half(rng, width, height, nseg, increasing):
    cuts = np.sort(rng.uniform(0.0, 1.0, size=nseg - 1))
    widths = np.diff(np.concatenate([[0.0], cuts, [1.0]])) * width
    widths = np.maximum(widths, width * 1e-6)
    widths *= width / widths.sum()
    raw = np.sort(rng.uniform(0.05, 1.0, size=nseg))[::-1]   # decreasing magnitudes
    if not increasing:
        raw = raw[::-1]
    raw *= height / float(np.dot(widths, raw))
    return widths, raw


def _cap(rng, a, b, height, nseg) -> list[tuple[float, float]]:
    wl, sl = _concave_half(rng, -a, height, nseg, increasing=True)
    wr, sr = _concave_half(rng, b, height, nseg, increasing=False)
    knots = [(a, 0.0)]
    x, y = a, 0.0
    for w, s in zip(wl[:-1], sl[:-1]):
        x += w
        y += w * s
        knots.append((x, y))
    knots.append((0.0, height))
    x, y = 0.0, height
    for w, s in zip(wr[:-1], sr[:-1]):
        x += w
        y -= w * s
        knots.append((x, y))
    knots.append((b, 0.0))
    return knots


def sample_cclass(seed: int, count: int, knots: int = 4) -> list[CClassSet]:
    """Random C-class sets with log-uniform extents and heights in [1e-3, 1e3].

    ``knots`` counts knots on each half cap including x = 0 and the endpoint,
    so ``knots=2`` yields quadrilaterals.  Slopes are sorted to make every cap
    concave with its peak at x = 0.
    """
    if knots < 2:
        raise ValueError("knots must be >= 2")
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        a, b, hu, hl = 10.0 ** rng.uniform(-3.0, 3.0, size=4)
        a = -a
        out.append(CClassSet.from_knots(_cap(rng, a, b, hu, knots - 1),
                                        _cap(rng, a, b, hl, knots - 1)))
    return out


# ---------------------------------------------------------------------------
# text format


def _lines(src) -> list[str]:
    if isinstance(src, (str, os.PathLike)) and os.path.exists(src):
        with open(src) as fh:
            text = fh.read()
    elif isinstance(src, str):
        text = src
    else:
        text = src.read()
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def _pair(line: str, lineno: int) -> tuple[float, float]:
    parts = line.split()
    if len(parts) != 2:
        raise ValueError(f"line {lineno}: expected 'x y', got {line!r}")
    try:
        x, y = float(parts[0]), float(parts[1])
    except ValueError:
        raise ValueError(f"line {lineno}: not a number pair: {line!r}") from None
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"line {lineno}: non-finite coordinate")
    return x, y


def read_polygon(src: str | os.PathLike | TextIO) -> ConvexPolygon:
    """Parse a polygon from a path, a string, or an open file; either orientation is accepted."""
    pts = [_pair(line, i) for i, line in enumerate(_lines(src), 1)]
    if len(pts) < 3:
        raise InvalidPolygon(f"need at least 3 vertices, got {len(pts)}")
    return ConvexPolygon.from_points(pts)


def format_polygon(P: ConvexPolygon) -> str:
    return "".join(f"{x:.17g} {y:.17g}\n" for x, y in P.vertices)


def read_cclass(src: str | os.PathLike | TextIO) -> CClassSet:
    sections: dict[str, list] = {}
    current = None
    for i, line in enumerate(_lines(src), 1):
        key = line.lower()
        if key in ("upper", "lower"):
            current = sections.setdefault(key, [])
            continue
        if current is None:
            raise ValueError(f"line {i}: knot before 'upper'/'lower' header")
        current.append(_pair(line, i))
    if set(sections) != {"upper", "lower"}:
        raise ValueError("C-class file needs both 'upper' and 'lower' sections")
    return CClassSet.from_knots(sections["upper"], sections["lower"])


def format_cclass(c: CClassSet) -> str:
    buf = io.StringIO()
    for name, knots in (("upper", c.upper), ("lower", c.lower)):
        buf.write(name + "\n")
        for x, y in knots:
            buf.write(f"{x:.17g} {y:.17g}\n")
    return buf.getvalue()
