"""Maximization drivers and scans.

1-D: golden section for the radius of regular polygons, bisection for the
sign change of the triangle derivative factor.  2-D: grid scan plus
Nelder-Mead for Phi, grid scan for the supremum of I, root finding for
critical points of I and u.  Polygons: coordinate ascent on the Gaussian
perimeter with convexity enforced by rejection.
"""
from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy import optimize, special as sp

from . import special as sf
from .errors import BracketError, InvalidPolygon
from .gauss_core import SQRT_HALF_PI, ConvexPolygon, polygon_gaussian_perimeter

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float
    tol: float = 1e-10

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if not self.tol > 0:
            raise ValueError("tol must be positive")


def scan_threads() -> int:
    """Worker count for data-parallel scans, from GAUSSISO_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("GAUSSISO_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn, items):
    n = scan_threads()
    if n == 1:
        return list(map(fn, items))
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# one-dimensional


def bisect_root(fn: Callable[[float], float], lo: float, hi: float, tol: float = 1e-14,
                max_iter: int = 200) -> float:
    flo, fhi = fn(lo), fn(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f = {flo:.3e}, {fhi:.3e}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol or mid in (lo, hi):
            break
        fm = fn(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def golden_section_max(fn: Callable[[float], float], lo: float, hi: float,
                       tol: float = 1e-10, max_iter: int = 500) -> tuple[float, float]:
    """Maximize a unimodal function on [lo, hi]; returns (argmax, max)."""
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = fn(x1), fn(x2)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = fn(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = fn(x1)
    x = 0.5 * (lo + hi)
    return x, fn(x)


def is_unimodal(values: np.ndarray) -> bool:
    d = np.sign(np.diff(values))
    d = d[d != 0]
    return int(np.count_nonzero(np.diff(d) != 0)) <= 1


class RadiusMax(NamedTuple):
    r_hat: float
    value: float


def triangle_root(lo: float = 1.49, hi: float = 1.50, tol: float = 1e-14) -> float:
    """Root of the triangle derivative factor by bisection."""
    return bisect_root(sf.g_triangle, lo, hi, tol)


def maximize_ngon_radius(n: int, b: Bracket = Bracket(1e-3, 10.0)) -> RadiusMax:
    fn = lambda r: sf.ngon_perimeter_closed(n, r)
    grid = np.linspace(b.lo, b.hi, 1000)
    vals = np.array([fn(r) for r in grid])
    k = int(np.argmax(vals))
    if k == 0 or k == len(grid) - 1:
        raise BracketError(f"maximum of the {n}-gon perimeter sits on the bracket end r={grid[k]}")
    if is_unimodal(vals):
        lo, hi = b.lo, b.hi
    else:
        lo, hi = grid[k - 1], grid[k + 1]
    r_hat, value = golden_section_max(fn, lo, hi, b.tol)
    if n == 3:
        r_root = bisect_root(sf.g_triangle, grid[k - 1], grid[k + 1])
        if abs(r_root - r_hat) > 1e-6:
            raise BracketError(f"golden section ({r_hat}) and root of g ({r_root}) disagree")
    return RadiusMax(r_hat, value)


# ---------------------------------------------------------------------------
# two-dimensional scans (vectorized twins of the scalar functions)


def gauss_integral_array(a, b):
    """Vectorized integral of exp(-t^2/2) over [a, b] for a <= b."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    s = 1.0 / math.sqrt(2.0)
    # erfc differences only where erf would round both ends to about +-1
    pos = a >= 1.0
    neg = b <= -1.0
    out = SQRT_HALF_PI * (sp.erf(b * s) - sp.erf(a * s))
    out = np.where(pos, SQRT_HALF_PI * (sp.erfc(a * s) - sp.erfc(b * s)), out)
    out = np.where(neg, SQRT_HALF_PI * (sp.erfc(-b * s) - sp.erfc(-a * s)), out)
    return out


def I_array(alpha, beta):
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    return np.exp(-0.5 * alpha * beta) * gauss_integral_array(-alpha, beta)


def Phi_array(alpha, beta):
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        pref = (np.sqrt(alpha) + np.sqrt(beta)) / np.sqrt(alpha + beta)
    return pref * I_array(alpha, beta)


def _grid_rows(fn, axis: np.ndarray) -> np.ndarray:
    rows = parallel_map(lambda a: fn(np.full_like(axis, a), axis), axis)
    return np.vstack(rows)


class PhiMax(NamedTuple):
    point: sf.AlphaBeta
    value: float


def maximize_phi(grid: int = 64, refine_tol: float = 1e-8, start_transposed: bool = False) -> PhiMax:
    """Grid scan over [0, 8]^2 then Nelder-Mead refinement; returned with alpha <= beta."""
    if grid < 32:
        raise ValueError("grid must be >= 32")
    axis = np.linspace(0.0, 8.0, grid + 1)[1:]
    vals = _grid_rows(Phi_array, axis)
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    x0 = np.array([axis[i], axis[j]])
    h = axis[1] - axis[0]
    simplex = np.array([x0, x0 + [h, 0.0], x0 + [0.0, h]])
    if start_transposed:
        simplex = simplex[:, ::-1]
    res = optimize.minimize(
        lambda p: -sf.Phi_func((abs(p[0]), abs(p[1]))), simplex[0], method="Nelder-Mead",
        options={"initial_simplex": simplex, "xatol": refine_tol, "fatol": 1e-15, "maxiter": 4000},
    )
    point = sf.AlphaBeta(abs(float(res.x[0])), abs(float(res.x[1]))).canonical()
    return PhiMax(point, sf.Phi_func(point))


class ISup(NamedTuple):
    sup_found: float
    argmax: sf.AlphaBeta
    log_deficit: float


def _log_deficit(p: sf.AlphaBeta) -> float:
    """log(sqrt(pi/2) - I(p)), exact on the axes where rounding would hide the gap."""
    if min(p.alpha, p.beta) == 0.0:
        t = max(p.alpha, p.beta)
        return 0.5 * math.log(2.0 * math.pi) + float(sp.log_ndtr(-t))
    gap = SQRT_HALF_PI - sf.I_func(p)
    return math.log(gap) if gap > 0 else -math.inf


def scan_I_sup(G: float = 40.0, grid: int = 2000) -> ISup:
    """Maximum of I over the (grid+1)^2 lattice on [0, G]^2, axes included."""
    if G < 10:
        raise ValueError("G must be >= 10")
    axis = np.linspace(0.0, G, grid + 1)
    vals = _grid_rows(I_array, axis)
    # far out along the axes many nodes round to the same value; report the outermost
    ties = np.argwhere(vals == vals.max())
    i, j = max(ties, key=lambda ij: (axis[ij[0]] + axis[ij[1]], axis[ij[1]]))
    p = sf.AlphaBeta(float(axis[i]), float(axis[j]))
    return ISup(sf.I_func(p), p, _log_deficit(p))


# ---------------------------------------------------------------------------
# critical points


@dataclass
class CriticalCurve:
    """Quantities along beta = f(alpha), alpha in (0, 1]."""

    alpha: np.ndarray
    beta: np.ndarray
    candidate_values: np.ndarray     # u(alpha): the value I would take at a critical point
    I_values: np.ndarray
    residual: np.ndarray              # first component of critical_residual


def critical_curve(n: int = 10_000, lo: float = 1e-6) -> CriticalCurve:
    alpha = np.geomspace(lo, 1.0, n)
    beta = np.array([sf.f_implicit(a) for a in alpha])
    u = np.array([sf.u_func(a) for a in alpha])
    I_vals = np.array([sf.I_func((a, b)) for a, b in zip(alpha, beta)])
    res = np.array([sf.critical_residual((a, b))[0] for a, b in zip(alpha, beta)])
    return CriticalCurve(alpha, beta, u, I_vals, res)


def locate_I_critical_points(starts=None, tol: float = 1e-8) -> list[sf.AlphaBeta]:
    """Interior zeros of grad I reached by a 2-D root find from each start.

    Points are returned only when both residuals are below ``tol``.
    """
    if starts is None:
        g = np.geomspace(0.05, 6.0, 6)
        starts = [(a, b) for a in g for b in g]
    found: list[sf.AlphaBeta] = []

    def resid(p):
        a, b = abs(p[0]) + 1e-300, abs(p[1]) + 1e-300
        return sf.critical_residual((a, b))

    for s in starts:
        sol = optimize.root(resid, np.asarray(s, dtype=float), method="hybr")
        a, b = abs(float(sol.x[0])), abs(float(sol.x[1]))
        if not (a > 0 and b > 0 and math.isfinite(a + b)):
            continue
        r1, r2 = sf.critical_residual((a, b))
        if max(abs(r1), abs(r2)) < tol:
            p = sf.AlphaBeta(a, b).canonical()
            if all(abs(p.alpha - q.alpha) + abs(p.beta - q.beta) > 1e-6 for q in found):
                found.append(p)
    return found


def u_critical_points(n: int = 10_000, lo: float = 1e-8, hi: float = 1.0 - 1e-9) -> list[float]:
    """Interior critical points of u: sign changes of a central difference on a log grid, bisected."""
    def du(x):
        h = 1e-6 * x
        return (sf.u_func(min(x + h, 1.0)) - sf.u_func(x - h)) / (min(x + h, 1.0) - (x - h))

    xs = np.geomspace(lo, hi, n)
    d = np.array([du(x) for x in xs])
    out = []
    for k in np.nonzero(np.sign(d[:-1]) * np.sign(d[1:]) < 0)[0]:
        out.append(bisect_root(du, float(xs[k]), float(xs[k + 1]), tol=1e-13))
    return out


# ---------------------------------------------------------------------------
# polygon ascent


def flatness_report(P: ConvexPolygon) -> list[float]:
    """Exterior turning angle at each vertex (vertex i sits between edges i-1 and i)."""
    if not isinstance(P, ConvexPolygon):
        P = ConvexPolygon(P)
    v = P.vertices
    e = np.roll(v, -1, axis=0) - v
    e_prev = np.roll(e, 1, axis=0)
    cross = e_prev[:, 0] * e[:, 1] - e_prev[:, 1] * e[:, 0]
    dot = (e_prev * e).sum(1)
    return [float(t) for t in np.arctan2(cross, dot)]


def aspect_ratio(P: ConvexPolygon) -> float:
    """Width over height of the minimum-width orientation (long side / short side)."""
    v = P.vertices
    best = None
    for a, b in P.edges():
        d = b - a
        d = d / math.hypot(*d)
        nrm = np.array([-d[1], d[0]])
        height = float(np.ptp(v @ nrm))
        width = float(np.ptp(v @ d))
        if best is None or height < best[0]:
            best = (height, width)
    height, width = best
    return width / height if height > 0 else math.inf


@dataclass(frozen=True)
class AscentConfig:
    """``convexity_penalty`` is the smallest exterior turning angle a move may leave."""

    step0: float = 0.1
    shrink: float = 0.5
    max_iters: int = 1000
    convexity_penalty: float = 1e-6
    seed: int = 0
    min_step: float = 1e-10

    def __post_init__(self):
        if not self.step0 > 0:
            raise ValueError("step0 must be positive")
        if not 0 < self.shrink < 1:
            raise ValueError("shrink must lie in (0, 1)")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


@dataclass
class AscentTrace:
    iterates: list = field(default_factory=list)      # (ConvexPolygon, perimeter)
    flatness: list = field(default_factory=list)
    aspect: float = 1.0
    stalled: bool = False

    @property
    def perimeters(self) -> list[float]:
        return [p for _, p in self.iterates]

    @property
    def final(self) -> ConvexPolygon:
        return self.iterates[-1][0]

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            self.to_csv(fh)

    def to_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["iteration", "perimeter", "aspect"])
        for k, (P, per) in enumerate(self.iterates):
            w.writerow([k, f"{per:.15e}", f"{aspect_ratio(P):.15e}"])


def _try_polygon(v: np.ndarray, min_turn: float):
    try:
        P = ConvexPolygon(v)
    except InvalidPolygon:
        return None
    if min(flatness_report(P)) < min_turn:
        return None
    return P


def _affine_moves(v: np.ndarray, step: float):
    """Whole-polygon moves that keep convexity: translations, axis stretches, rotations."""
    for d in ((step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)):
        yield v + np.array(d)
    for sx, sy in ((1 + step, 1.0), (1 / (1 + step), 1.0), (1.0, 1 + step), (1.0, 1 / (1 + step))):
        yield v * np.array([sx, sy])
    for ang in (step, -step):
        c, s = math.cos(ang), math.sin(ang)
        yield v @ np.array([[c, s], [-s, c]])


def _vertex_moves(v: np.ndarray, i: int, step: float, rng):
    theta = rng.uniform(0.0, 2.0 * math.pi)
    dirs = [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0),
            (math.cos(theta), math.sin(theta)), (-math.cos(theta), -math.sin(theta))]
    for d in dirs:
        w = v.copy()
        w[i] += step * np.asarray(d)
        yield w


def ascend_polygon(start: ConvexPolygon, cfg: AscentConfig = AscentConfig()) -> AscentTrace:
    """Derivative-free ascent on the Gaussian perimeter.

    A sweep visits every vertex once, in a seeded random order, followed by one
    whole-polygon visit.  A vertex visit tries the four axis-aligned moves and
    one random direction (both signs); the polygon visit tries translations,
    axis stretches and small rotations.  The best improving move that keeps
    the polygon strictly convex is taken; otherwise nothing changes.  Each
    visit is one iteration.  After a sweep without improvement the step
    shrinks, and once it falls below ``cfg.min_step`` the run stops with
    ``stalled`` set.
    """
    rng = np.random.default_rng(cfg.seed)
    P = start if isinstance(start, ConvexPolygon) else ConvexPolygon(start)
    per = polygon_gaussian_perimeter(P)
    trace = AscentTrace(iterates=[(P, per)])
    step = cfg.step0
    order: list[int] = []
    improved_in_sweep = False
    sweeps = 0
    for _ in range(cfg.max_iters):
        if not order:
            if sweeps and not improved_in_sweep:
                step *= cfg.shrink
            sweeps += 1
            if step < cfg.min_step:
                trace.stalled = True
                break
            order = [-1] + [int(k) for k in rng.permutation(len(P))]
            improved_in_sweep = False
        i = order.pop()
        v = P.vertices
        candidates = _affine_moves(v, step) if i < 0 else _vertex_moves(v, i, step, rng)
        best = None
        for w in candidates:
            cand = _try_polygon(w, cfg.convexity_penalty)
            if cand is None:
                continue
            val = polygon_gaussian_perimeter(cand)
            if val > per and (best is None or val > best[1]):
                best = (cand, val)
        if best is not None:
            P, per = best
            improved_in_sweep = True
        trace.iterates.append((P, per))
    trace.flatness = flatness_report(P)
    trace.aspect = aspect_ratio(P)
    return trace
