import csv
import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gaussiso import search
from gaussiso import special as sf
from gaussiso.errors import BracketError
from gaussiso.gauss_core import SQRT_HALF_PI, polygon_gaussian_perimeter
from gaussiso.shapes import QuadT, regular_ngon

SQRT_2_OVER_PI = math.sqrt(2 / math.pi)


# ---------------------------------------------------------------------------
# one-dimensional tools


def test_bracket_validation():
    with pytest.raises(ValueError):
        search.Bracket(2.0, 1.0)


def test_bisect_root():
    assert search.bisect_root(lambda x: x * x - 2, 0, 2) == pytest.approx(math.sqrt(2), abs=1e-14)
    with pytest.raises(BracketError):
        search.bisect_root(lambda x: x * x + 1, -1, 1)


def test_golden_section():
    x, fx = search.golden_section_max(lambda x: -(x - 0.3) ** 2, -1, 2, tol=1e-10)
    assert x == pytest.approx(0.3, abs=1e-8)


def test_is_unimodal():
    assert search.is_unimodal(np.array([1, 2, 3, 2, 1.0]))
    assert not search.is_unimodal(np.array([1, 3, 2, 3, 1.0]))


def test_triangle_root():
    r = search.triangle_root()
    assert 1.49 < r < 1.50
    assert abs(sf.g_triangle(r)) < 1e-12


@pytest.mark.parametrize("n", [3, 4, 5, 6, 8, 12])
def test_ngon_radius_is_stationary(n):
    res = search.maximize_ngon_radius(n)
    h = 1e-4
    assert sf.ngon_perimeter_closed(n, res.r_hat) >= sf.ngon_perimeter_closed(n, res.r_hat + h)
    assert sf.ngon_perimeter_closed(n, res.r_hat) >= sf.ngon_perimeter_closed(n, res.r_hat - h)
    assert res.value < SQRT_2_OVER_PI


def test_triangle_maximum():
    res = search.maximize_ngon_radius(3)
    assert 1.49 < res.r_hat < 1.50
    assert res.value < 0.7382
    assert abs(res.r_hat - search.triangle_root()) < 1e-6


def test_pentagon_maximum():
    assert search.maximize_ngon_radius(5).value <= 0.7497


def test_ngon_bracket_edge():
    with pytest.raises(BracketError):
        search.maximize_ngon_radius(3, search.Bracket(0.1, 1.0))


# ---------------------------------------------------------------------------
# two-dimensional scans


@settings(max_examples=50)
@given(st.floats(0, 20), st.floats(0, 20))
def test_array_twins(a, b):
    assert float(search.I_array(a, b)) == pytest.approx(sf.I_func((a, b)), rel=1e-13, abs=1e-300)
    if a + b > 0:
        assert float(search.Phi_array(a, b)) == pytest.approx(sf.Phi_func((a, b)), rel=1e-13, abs=1e-300)


def test_maximize_phi():
    res = search.maximize_phi()
    assert res.point.alpha == pytest.approx(0.8769, abs=1e-2)
    assert res.point.beta == pytest.approx(0.8769, abs=1e-2)
    assert res.value == pytest.approx(1.4950, abs=5e-4)
    assert res.value < math.sqrt(math.pi)
    assert 4 * res.value / (2 * math.pi) == pytest.approx(0.9517, abs=5e-4)


def test_maximize_phi_transposed_start():
    a = search.maximize_phi()
    b = search.maximize_phi(start_transposed=True)
    assert a.value == pytest.approx(b.value, abs=1e-12)
    assert a.point.alpha == pytest.approx(b.point.alpha, abs=1e-6)


def test_scan_I_sup():
    res = search.scan_I_sup(40.0, 2000)
    assert SQRT_HALF_PI - 1e-6 < res.sup_found <= SQRT_HALF_PI
    # the grid maximum rounds onto sqrt(pi/2); strictness shows in the exact deficit
    assert math.isfinite(res.log_deficit) and res.log_deficit < -700
    assert min(res.argmax.alpha, res.argmax.beta) < 40.0 / 2000
    assert max(res.argmax.alpha, res.argmax.beta) == 40.0


def test_scan_I_sup_small_window():
    with pytest.raises(ValueError):
        search.scan_I_sup(5.0)


def test_I_strict_at_eight():
    v = sf.I_func((8.0, 0.0))
    assert v < SQRT_HALF_PI
    assert SQRT_HALF_PI - v < 1e-10


def test_critical_curve_candidates():
    curve = search.critical_curve(2000)
    # u scan oracle
    u = np.array([sf.u_func(a) for a in curve.alpha])
    np.testing.assert_array_equal(curve.candidate_values, u)
    assert curve.candidate_values.max() <= sf.TWO_OVER_E + 1e-9
    # no zero of the residual on this branch
    assert np.abs(curve.residual).min() > 1e-8


def test_u_has_no_interior_critical_points():
    assert search.u_critical_points(2000) == []


# ---------------------------------------------------------------------------
# polygons and ascent


def test_flatness_regular():
    for n in (3, 5, 9):
        np.testing.assert_allclose(search.flatness_report(regular_ngon(n, 1.3)), 2 * math.pi / n, rtol=1e-12)


def test_flatness_quad():
    np.testing.assert_allclose(search.flatness_report(QuadT(1, 1, 1, 1).polygon()), math.pi / 2, rtol=1e-12)


@settings(max_examples=50)
@given(st.floats(0.01, 100), st.floats(0.01, 100), st.floats(0.01, 100), st.floats(0.01, 100))
def test_flatness_sum(p, q, r, s):
    assert sum(search.flatness_report(QuadT(p, q, r, s).polygon())) == pytest.approx(2 * math.pi, rel=1e-12)


def test_aspect_ratio():
    assert search.aspect_ratio(QuadT(4, 1, 4, 1).polygon()) == pytest.approx(4.0, rel=1e-12)
    assert search.aspect_ratio(regular_ngon(4, 1)) == pytest.approx(1.0, rel=1e-12)


def test_ascent_config_validation():
    with pytest.raises(ValueError):
        search.AscentConfig(shrink=1.0)
    with pytest.raises(ValueError):
        search.AscentConfig(step0=0.0)


def test_ascent_square_improves():
    start = regular_ngon(4, 1.0)
    trace = search.ascend_polygon(start, search.AscentConfig(max_iters=300))
    per = trace.perimeters
    assert per[-1] > polygon_gaussian_perimeter(start)
    assert all(b >= a for a, b in zip(per, per[1:]))
    assert max(per) < 4 * 2 ** 0.25
    assert min(trace.flatness) >= search.AscentConfig().convexity_penalty


def test_ascent_deterministic():
    cfg = search.AscentConfig(max_iters=100, seed=5)
    a = search.ascend_polygon(regular_ngon(6, 1.0), cfg)
    b = search.ascend_polygon(regular_ngon(6, 1.0), cfg)
    assert a.perimeters == b.perimeters


def test_ascent_trace_csv():
    trace = search.ascend_polygon(regular_ngon(5, 1.0), search.AscentConfig(max_iters=20))
    buf = io.StringIO()
    trace.to_csv(buf)
    rows = list(csv.reader(io.StringIO(buf.getvalue())))
    assert rows[0] == ["iteration", "perimeter", "aspect"]
    assert len(rows) == len(trace.iterates) + 1
    assert float(rows[-1][1]) == trace.perimeters[-1]


@pytest.mark.slow
def test_ascent_octagon_degenerates():
    # pilot: 10^4 iterations from the regular octagon reach aspect ratio ~1.6e4
    trace = search.ascend_polygon(regular_ngon(8, 1.0), search.AscentConfig(max_iters=10_000))
    assert trace.aspect > 1e3
    per = trace.perimeters
    assert all(b >= a for a, b in zip(per, per[1:]))
    assert per[-1] < SQRT_2_OVER_PI
    assert per[-1] > 0.797
