import json
import math

import pytest

from gaussiso import verify


@pytest.fixture(scope="module")
def report():
    return verify.verify_all(42)


def test_all_passed(report):
    failed = [r.claim_id for r in report.results if not r.passed]
    assert report.all_passed, failed


def test_claim_count(report):
    assert len(report.results) >= 12
    ids = [r.claim_id for r in report.results]
    assert len(ids) == len(set(ids))


def test_deterministic(report):
    again = verify.verify_all(42)
    assert again.to_json() == report.to_json()


def test_json_shape(report):
    d = json.loads(report.to_json())
    assert set(d) == {"claims", "all_passed", "seed"}
    assert d["seed"] == 42
    for c in d["claims"]:
        assert {"claim_id", "computed", "expected", "tolerance", "passed", "checks"} <= set(c)
        # runtimes vary between runs and stay out of the report
        assert "runtime_ms" not in c


def test_table(report):
    lines = report.table().splitlines()
    assert len(lines) == len(report.results) + 2
    assert lines[-1] == "all passed: True"


def test_suites_under_a_minute(report):
    assert sum(r.runtime_ms for r in report.results) < 60_000


def test_quadrilateral_runtime(report):
    (r,) = [r for r in report.results if r.claim_id == "quadrilateral_bound"]
    assert r.runtime_ms < 5000
    assert r.values["count"] == 10_000


def test_every_suite_reachable():
    for name, suite in verify.SUITES.items():
        assert callable(suite), name


def test_claim_kinds():
    r = verify.ClaimResult("x", 1.0, 2.0, 0.0, "below")
    assert r.passed
    r = verify.ClaimResult("x", 2.0, 2.0, 0.0, "below")
    assert not r.passed
    r = verify.ClaimResult("x", 1.5, (1.0, 2.0), 0.0, "within")
    assert r.passed
    r = verify.ClaimResult("x", 1.0, 1.0, 0.0, "close", checks={"side": False})
    assert r.headline_ok and not r.passed
    with pytest.raises(ValueError):
        verify.ClaimResult("x", 1.0, 1.0, 0.0, "sideways").headline_ok


def test_failure_is_reported():
    rep = verify.VerificationReport([verify.ClaimResult("bad", 1.0, 0.0, 0.1)], seed=1)
    assert not rep.all_passed
    assert "FAIL" in rep.table()


def test_I_sup_reports_diagonal_point(report):
    (r,) = [r for r in report.results if r.claim_id == "I_supremum"]
    assert r.values["f_branch_critical_points"] == 0
    assert 2 / math.e < r.values["max_diagonal_critical_value"] < math.sqrt(math.pi / 2)
