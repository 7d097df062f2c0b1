"""Scalar special functions of the quadrilateral and C-class bounds.

Notation:

* ``I(alpha, beta) = exp(-alpha*beta/2) * int_{-alpha}^{beta} exp(-s^2/2) ds``
  is the Gaussian length of one side of a quadrilateral with vertices on the
  axes, after the change of variables done by :func:`side_to_alphabeta`.
* ``f`` is the branch map of ``t -> t*exp(-t^2/2)``: for ``x`` in (0, 1] it
  returns the ``y >= 1`` with the same value.
* ``u``, ``v`` are the auxiliary functions bounding critical values of ``I``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, NonFinite
from .gauss_core import SQRT_HALF_PI, gauss_integral

TWO_OVER_E = 2.0 / math.e
SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class AlphaBeta:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise DomainError("alpha and beta must be finite")
        if self.alpha < 0 or self.beta < 0:
            raise DomainError(f"alpha, beta must be >= 0, got ({self.alpha}, {self.beta})")

    def swapped(self) -> "AlphaBeta":
        return AlphaBeta(self.beta, self.alpha)

    def canonical(self) -> "AlphaBeta":
        """Representative with alpha <= beta (I and Phi are symmetric)."""
        return self if self.alpha <= self.beta else self.swapped()


@dataclass(frozen=True)
class SideParams:
    """Side of a quadrilateral joining (0, a) and (L, 0)."""

    a: float
    L: float

    def __post_init__(self):
        if not (self.a > 0 and self.L > 0):
            raise DomainError(f"a and L must be positive, got a={self.a}, L={self.L}")


def _ab(p) -> tuple[float, float]:
    if not isinstance(p, AlphaBeta):
        p = AlphaBeta(*p)
    return p.alpha, p.beta


def I_func(p: AlphaBeta) -> float:
    alpha, beta = _ab(p)
    return math.exp(-0.5 * alpha * beta) * gauss_integral(-alpha, beta)


def side_to_alphabeta(s: SideParams) -> AlphaBeta:
    h = math.hypot(s.L, s.a)
    return AlphaBeta(s.a * s.a / h, s.L * s.L / h)


def Phi_func(p: AlphaBeta) -> float:
    alpha, beta = _ab(p)
    if alpha == 0 and beta == 0:
        raise DomainError("Phi is undefined at the origin")
    return (math.sqrt(alpha) + math.sqrt(beta)) / math.sqrt(alpha + beta) * I_func(AlphaBeta(alpha, beta))


# ---------------------------------------------------------------------------
# the branch map f


def _gap_series(e: float) -> float:
    # -(log1p(e) - e - e^2/2) / e^2 = 1 - e/3 + e^2/4 - e^3/5 + ...
    total = 1.0
    term = 1.0
    for k in range(3, 30):
        term *= -e
        total += term / k
    return total


def _root_gap(t: float, e: float) -> float:
    """sqrt(t^2/2 - 1/2 - log t) for t = 1 + e: the depth below the peak of log t - t^2/2.

    Both ``t`` and ``e`` are passed so neither has to be recovered by a
    cancelling subtraction.
    """
    if abs(e) < 0.1:
        return abs(e) * math.sqrt(_gap_series(e))
    return math.sqrt(0.5 * t * t - 0.5 - math.log(t))


def _d_root_gap(w: float) -> float:
    # derivative of _root_gap(1 + w, w) in w, for w >= 0
    if w < 0.1:
        return (2.0 + w) / (2.0 * (1.0 + w) * math.sqrt(_gap_series(w)))
    return w * (2.0 + w) / (2.0 * (1.0 + w) * _root_gap(1.0 + w, w))


def _upper_branch_offset(x: float) -> float:
    """Return w = f(x) - 1 >= 0 by safeguarded Newton on the root-gap equation."""
    target = _root_gap(x, x - 1.0)
    if target == 0.0:
        return 0.0
    # root gap grows like w near 0 and like w/sqrt(2) for large w
    lo, hi = 0.0, 1.5 * target + 1.0
    w = target
    for _ in range(200):
        if not lo < w < hi:
            w = 0.5 * (lo + hi)
        r = _root_gap(1.0 + w, w) - target
        if r == 0.0:
            return w
        if r > 0:
            hi = w
        else:
            lo = w
        step = r / _d_root_gap(w)
        w_new = w - step
        if abs(step) <= 4e-16 * w:
            return w_new if lo <= w_new <= hi else w
        if hi - lo <= 4e-16 * hi:
            return 0.5 * (lo + hi)
        w = w_new
    return w


def _check_unit(x: float, closed: bool = True) -> None:
    ok = 0.0 < x <= 1.0 if closed else 0.0 < x < 1.0
    if not ok:
        interval = "(0, 1]" if closed else "(0, 1)"
        raise DomainError(f"x must lie in {interval}, got {x}")


def f_implicit(x: float) -> float:
    """The y >= 1 with y*exp(-y^2/2) == x*exp(-x^2/2), for 0 < x <= 1."""
    _check_unit(x)
    return 1.0 + _upper_branch_offset(x)


def f_prime(x: float) -> float:
    _check_unit(x, closed=False)
    w = _upper_branch_offset(x)
    fx = 1.0 + w
    # (1 - x^2) f / ((1 - f^2) x) with both differences formed without cancellation
    return (1.0 - x) * (1.0 + x) * fx / (-w * (2.0 + w) * x)


def branch_residual(x: float, y: float) -> float:
    """Relative residual of the defining equation of f at (x, y)."""
    lhs = x * math.exp(-0.5 * x * x)
    return abs(y * math.exp(-0.5 * y * y) - lhs) / lhs


def u_func(x: float) -> float:
    _check_unit(x)
    fx = f_implicit(x)
    return 2.0 / fx * math.exp(-0.5 * (x * fx + x * x))


def u_func_alt(x: float) -> float:
    """Second closed form of u, equal to :func:`u_func` because of the branch relation."""
    _check_unit(x)
    fx = f_implicit(x)
    return 2.0 / math.sqrt(x * fx) * math.exp(-0.25 * (x + fx) ** 2)


def v_func(t: float) -> float:
    if not t >= 1.0:
        raise DomainError(f"v is defined for t >= 1, got {t}")
    return 2.0 * math.exp(-t) * math.sqrt(2.0 * t - 1.0)


def critical_point_relation(x: float) -> float:
    """``(x + f)^2/2 - 1 - 1/(x f)``; vanishes at critical points of u."""
    fx = f_implicit(x)
    return 0.5 * (x + fx) ** 2 - 1.0 - 1.0 / (x * fx)


# ---------------------------------------------------------------------------
# triangle and regular polygon


def g_triangle(r: float) -> float:
    """Sign-carrying factor of d/dr of the perimeter of the centred equilateral triangle."""
    if r < 0:
        raise DomainError(f"r must be >= 0, got {r}")
    return math.sqrt(3.0) * math.exp(-3.0 * r * r / 8.0) - 0.5 * r * gauss_integral(0.0, math.sqrt(3.0) / 2.0 * r)


def ngon_perimeter_closed(n: int, r: float) -> float:
    """Normalized Gaussian perimeter of the regular n-gon of circumradius r centred at 0."""
    if int(n) != n or n < 3:
        raise DomainError(f"n must be an integer >= 3, got {n}")
    if not r > 0:
        raise DomainError(f"r must be positive, got {r}")
    t = math.pi / n
    return n / math.pi * math.exp(-0.5 * (r * math.cos(t)) ** 2) * gauss_integral(0.0, r * math.sin(t))


# ---------------------------------------------------------------------------
# stationarity conditions


def critical_residual(p: AlphaBeta) -> tuple[float, float]:
    """Residuals of the two equations characterizing grad I = 0 off the axes."""
    alpha, beta = _ab(p)
    if alpha <= 0 or beta <= 0:
        raise DomainError("critical_residual requires alpha, beta > 0")
    g = gauss_integral(-alpha, beta)
    return (g - 2.0 / alpha * math.exp(-0.5 * beta * beta),
            g - 2.0 / beta * math.exp(-0.5 * alpha * alpha))


def critical_branch(p: AlphaBeta, tol: float = 1e-7) -> str | None:
    """Which solution family of the equal-exponential condition ``p`` lies on.

    Equating the two right-hand sides of the critical equations gives
    ``beta*exp(-beta^2/2) == alpha*exp(-alpha^2/2)``, solved by ``beta == alpha``
    ("diagonal") and by ``beta == f(alpha)`` or ``alpha == f(beta)`` ("f-branch").
    """
    a, b = sorted(_ab(p))
    if abs(a - b) <= tol * max(1.0, b):
        return "diagonal"
    if 0 < a <= 1 and abs(f_implicit(a) - b) <= tol * max(1.0, b):
        return "f-branch"
    return None


def I_gradient(p: AlphaBeta) -> tuple[float, float]:
    """Analytic partial derivatives of I."""
    alpha, beta = _ab(p)
    damp = math.exp(-0.5 * alpha * beta)
    g = gauss_integral(-alpha, beta)
    return (damp * (-0.5 * beta * g + math.exp(-0.5 * alpha * alpha)),
            damp * (-0.5 * alpha * g + math.exp(-0.5 * beta * beta)))


def euler_lagrange_residual(f: Callable[[float], float], fp: Callable[[float], float],
                            fpp: Callable[[float], float], x: float) -> float:
    """(-f + x f')(1 + f'^2) - f'' at x, for a boundary graph y = f(x)."""
    y, s, k = f(x), fp(x), fpp(x)
    if not (math.isfinite(y) and math.isfinite(s) and math.isfinite(k)):
        raise NonFinite(f"f, f', f'' must be finite at x={x}")
    return (-y + x * s) * (1.0 + s * s) - k


def cut_indicator(y0: float, fpp: float) -> float:
    """Sign of the first variation of perimeter when the cap at an apex is cut off.

    Non-positive exactly when ``fpp <= -2*y0``.
    """
    if not fpp < 0:
        raise DomainError(f"apex curvature must be negative, got {fpp}")
    if not y0 > 0:
        raise DomainError(f"apex height must be positive, got {y0}")
    return -1.0 - 2.0 * y0 / fpp


__all__ = [
    "AlphaBeta", "SideParams", "I_func", "I_gradient", "Phi_func", "side_to_alphabeta",
    "f_implicit", "f_prime", "branch_residual", "u_func", "u_func_alt", "v_func",
    "critical_point_relation", "critical_branch", "g_triangle", "ngon_perimeter_closed", "critical_residual",
    "euler_lagrange_residual", "cut_indicator", "SQRT_HALF_PI", "TWO_OVER_E",
]
