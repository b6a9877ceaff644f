#!/usr/bin/env python3
"""
Test the identity registry, the exact and series verifiers, and run-all aggregation
"""

import math
import sys
import time
from fractions import Fraction
from unittest import mock

import pytest

# Add current directory to path for imports
sys.path.append('.')

import identity_suite as suite
from errors import DomainError, UnknownIdentityError

CATALOG_IDS = {
    "EX-B7a", "EX-B10", "EX-109", "EX-B18", "EX-L14", "EX-L15", "EX-EX3-M", "EX-PROP4", "EX-15",
    "EX-11a", "EX-8", "EX-4", "EX-9", "EX-EX10", "EX-EX11", "EX-B16", "SER-B6", "SER-B7", "SER-B9",
    "SER-B11", "SER-B12A", "SER-B17", "SER-PROP5", "SER-L13", "SER-L4", "SER-L3", "SER-L18", "SER-L2",
    "SER-L6", "SER-EX8-COR", "SER-L5", "SER-L10a", "SER-L11", "SER-EX10-COR", "SER-L19", "SER-L20",
    "SER-FINAL", "SER-EX9INT",
}
ZETA2 = math.pi ** 2 / 6


def _fake_report(status, kind="series-closed-form"):
    return suite.VerificationReport(
        id="X", kind=kind, params={}, lhs=0.0, rhs=0.0, abs_err=0.0, rel_err=0.0, tol=1e-8,
        status=status, terms_used=0, elapsed_ms=None, paper_ref="",
    )


def test_registry_contents():
    print("🧪 TESTING REGISTRY")
    records = suite.registry()
    ids = [record.id for record in records]
    assert len(ids) == len(set(ids))
    assert CATALOG_IDS <= set(ids)
    for record in records:
        assert record.is_exact == record.id.startswith("EX-"), record.id
        assert record.grid, record.id
        assert record.paper_ref, record.id
    claimed = {record.id for record in records if record.is_claimed}
    assert claimed == {"SER-EX10-COR", "SER-L11-PRINTED"}
    with pytest.raises(UnknownIdentityError):
        suite.get_record("NOPE")
    print(f"✅ {len(ids)} identities registered")


def test_filters():
    print("🧪 TESTING FILTER EXPRESSIONS")
    assert len(suite.select("exact")) == 16
    assert len(suite.select("exact-finite")) == 16
    assert {r.id for r in suite.select("paper-claimed")} == {"SER-EX10-COR", "SER-L11-PRINTED"}
    assert {r.id for r in suite.select("EX-B1*")} == {"EX-B10", "EX-B16", "EX-B18"}
    assert {r.id for r in suite.select("EX-B10,SER-L19")} == {"EX-B10", "SER-L19"}
    assert suite.select("nothing-*") == []
    assert all(not r.is_exact for r in suite.select("series"))
    assert len(suite.select("")) == len(suite.registry())
    print("✅ Filters select the expected records")


def test_parameter_parsing():
    print("🧪 TESTING PARAMETER PARSING")
    assert suite.parse_params("n=25,z=1/4,which=H2") == {"n": 25, "z": Fraction(1, 4), "which": "H2"}
    assert suite.parse_params("") == {}
    with pytest.raises(DomainError):
        suite.parse_params("n25")
    with pytest.raises(DomainError):
        suite.verify("EX-B10", {"bogus": 1})
    record = suite.get_record("SER-EX10-COR")
    assert suite.resolve_points(record, {"m": 2}) == [{"m": 2, "which": "H2"}]
    print("✅ Parameters parsed and validated")


def test_verify_exact():
    print("🧪 TESTING EXACT VERIFICATION")
    report = suite.verify("EX-B10", {"n": 25})
    assert report.status == "PASS"
    assert report.abs_err == 0
    assert report.rhs == Fraction(126410606437752, 4 ** 25)
    assert report.tol == 0.0

    reports = suite.run_all("exact", jobs=2)
    assert len(reports) == 16
    for r in reports:
        assert r.status == "PASS", (r.id, r.params, r.lhs, r.rhs)
        assert r.abs_err == 0
    assert [r.id for r in reports] == sorted(r.id for r in reports)
    print("✅ Every exact identity holds bit-exactly")


def test_verify_wrong_kind():
    print("🧪 TESTING VERIFIER DISPATCH")
    with pytest.raises(DomainError):
        suite.verify_exact("SER-B6")
    with pytest.raises(DomainError):
        suite.verify_series("EX-B10")
    with pytest.raises(UnknownIdentityError):
        suite.verify("NOPE")
    print("✅ Wrong-kind calls rejected")


def test_series_closed_forms():
    print("🧪 TESTING SERIES CLOSED FORMS")
    l19 = suite.verify("SER-L19", {"r": 2})
    assert l19.status == "PASS"
    assert l19.rhs == pytest.approx(math.log(2.0) - 0.5, abs=1e-15)
    assert abs(l19.lhs - l19.rhs) < 1e-8

    l20 = suite.verify("SER-L20", {"case": "corollary", "r": 3, "m": 1})
    assert l20.status == "PASS"
    assert l20.rhs == pytest.approx(0.25)

    ex8 = suite.verify("SER-EX8-COR", {"case": "m1", "r": 2})
    assert ex8.status == "PASS"
    assert ex8.rhs == pytest.approx(2.5)
    print("✅ Closed forms reproduced")


def test_series_against_quadrature():
    print("🧪 TESTING SERIES AGAINST QUADRATURE")
    ex9 = suite.verify("SER-EX9INT", {"r": 1})
    assert ex9.status == "PASS"
    assert abs(ex9.rhs - 0.3606201929) < 1e-9

    for identity_id in ("SER-B11", "SER-B17", "SER-FINAL"):
        report = suite.verify(identity_id)
        assert report.status == "PASS", (identity_id, report.lhs, report.rhs, report.abs_err)
    print("✅ Series match their integrals")


def test_claimed_records_are_flagged():
    print("🧪 TESTING CLAIMED RECORDS")
    printed = suite.verify("SER-L11-PRINTED", {"m": 1})
    assert printed.status == "FLAGGED"
    assert printed.lhs == pytest.approx(-ZETA2, abs=1e-7)
    assert printed.rhs == pytest.approx(ZETA2)

    corollary = suite.verify("SER-EX10-COR", {"m": 1, "which": "H2"})
    assert corollary.status == "FLAGGED"
    assert corollary.lhs == pytest.approx(3 - ZETA2, abs=1e-7)
    assert corollary.rhs == pytest.approx(12 + math.pi ** 2 / 3)

    oriented = suite.verify("SER-L11", {"m": 1})
    assert oriented.status == "PASS"
    print("✅ Claimed constants flagged, corrected forms pass")


def test_parameter_ranges():
    print("🧪 TESTING PARAMETER RANGES")
    assert suite.parse_params("z=0.25,q=2.0") == {"z": Fraction(1, 4), "q": 2}
    out_of_range = [
        ("SER-L19", {"r": 1}),
        ("EX-EX11", {"r": 1}),
        ("SER-L2", {"r": 0}),
        ("SER-L20", {"case": "general", "r": 1, "m": 1}),
        ("SER-B9", {"z": 1}),
        ("SER-B6", {"z": Fraction(-1, 2)}),
        ("EX-EX3-M", {"m": 4}),
        ("SER-L5", {"case": "corollary", "m": 4}),
        ("SER-L20", {"case": "sideways"}),
        ("EX-B10", {"n": Fraction(1, 2)}),
    ]
    for identity_id, params in out_of_range:
        with pytest.raises(DomainError, match="out of range"):
            suite.resolve_points(suite.get_record(identity_id), params)
        with pytest.raises(DomainError):
            suite.verify(identity_id, params)

    # integer axes extend past the tabulated grid
    assert suite.resolve_points(suite.get_record("SER-L19"), {"r": 9}) == [{"r": 9}]
    point = suite.resolve_points(suite.get_record("SER-L5"), {"case": "general", "m": 4})[0]
    assert point["case"] == "general" and point["m"] == 4
    assert suite.resolve_points(suite.get_record("SER-B9"), {"z": Fraction(1, 3)})[0]["z"] == Fraction(1, 3)
    print("✅ Out-of-range points rejected before evaluation")


def test_unexpected_errors_become_error_reports():
    print("🧪 TESTING UNEXPECTED FAILURES IN run_all")
    with mock.patch.object(suite, "verify", side_effect=ZeroDivisionError("float division by zero")):
        reports = suite.run_all("EX-B10,SER-L19", jobs=2)
    assert [r.id for r in reports] == ["EX-B10", "SER-L19"]
    assert {r.status for r in reports} == {"ERROR"}
    assert "division by zero" in reports[0].message
    assert suite.exit_code(reports) == 1
    print("✅ Unexpected exceptions reported as ERROR")


def test_series_suite_passes():
    print("🧪 TESTING THE FULL SERIES SUITE")
    started = time.perf_counter()
    reports = suite.run_all("series")
    elapsed = time.perf_counter() - started
    assert elapsed < 120, f"series suite took {elapsed:.1f} s"
    assert len(reports) == len(suite.select("series"))
    for report in reports:
        expected = "FLAGGED" if report.kind == "paper-claimed" else "PASS"
        assert report.status == expected, (report.id, report.status, report.message)
    by_id = {report.id: report for report in reports}
    for identity_id in ("SER-B6", "SER-B9", "SER-PROP5", "SER-L13"):
        assert all(point.status == "PASS" for point in by_id[identity_id].points), identity_id
    assert suite.aggregate_status(reports) == "FLAGGED"
    assert suite.exit_code(reports) == 0
    print(f"✅ {len(reports)} series identities verified in {elapsed:.1f} s")


def test_series_constants():
    print("🧪 TESTING SERIES CONSTANTS")
    zeta3 = 1.2020569031595942
    ln2 = math.log(2.0)

    r2 = suite.verify("SER-EX8-COR", {"case": "r2", "r": 2})
    assert r2.status == "PASS"
    assert r2.rhs == pytest.approx(math.log(3.0) - ln2 + 0.5, abs=1e-15)

    # (−1)^{r+1} Σ_{k≤m} S(−k,r)
    l6 = {(1, 1): 2.0, (1, 2): 3.0, (2, 1): 1.25, (2, 2): 2.125}
    for (r, m), expected in l6.items():
        report = suite.verify("SER-L6", {"r": r, "m": m})
        assert report.status == "PASS", (r, m)
        assert report.rhs == pytest.approx(expected, abs=1e-14), (r, m)

    l5 = {2: ZETA2 + zeta3, 3: 2 * ZETA2 + 2 * zeta3 + math.pi ** 4 / 45}
    for m, expected in l5.items():
        report = suite.verify("SER-L5", {"case": "corollary", "r": 1, "m": m})
        assert report.status == "PASS", m
        assert report.rhs == pytest.approx(expected, rel=1e-14), m

    for r in range(2, 6):
        for m in (1, 2):
            report = suite.verify("SER-L20", {"case": "corollary", "r": r, "m": m})
            assert report.status == "PASS", (r, m)
            assert report.rhs == pytest.approx(m / (r - 1) ** (m + 1)), (r, m)

    b12 = {
        1: -math.log(4.0),
        2: ZETA2 + 2 * ln2 ** 2,
        3: -(4 * zeta3 + 8 / 3 * ln2 ** 3 + 2 * math.pi ** 2 / 3 * ln2) / 2,
    }
    for m, expected in b12.items():
        report = suite.verify("SER-B12A", {"m": m})
        assert report.status == "PASS", m
        assert report.rhs == pytest.approx(expected, rel=1e-9), m
    print("✅ Closed-form constants reproduced")


def test_tolerance_resolution():
    print("🧪 TESTING TOLERANCE PRECEDENCE")
    record = suite.get_record("SER-B6")
    assert suite.resolve_tol(record) == record.default_tol == 1e-9
    assert suite.resolve_tol(record, overrides={"SER-B6": 1e-5}) == 1e-5
    assert suite.resolve_tol(record, tol=1e-3, overrides={"SER-B6": 1e-5}) == 1e-3
    assert suite.resolve_tol(suite.get_record("EX-B10"), tol=1e-3) == 0.0
    with pytest.raises(DomainError):
        suite.verify_series("SER-B6", tol=-1.0)
    print("✅ Explicit tol beats overrides beats defaults")


def test_aggregation():
    print("🧪 TESTING AGGREGATION")
    passing = [_fake_report("PASS"), _fake_report("FLAGGED")]
    assert suite.aggregate_status(passing) == "FLAGGED"
    assert suite.exit_code(passing) == 0

    claimed_fail = passing + [_fake_report("FAIL", kind="paper-claimed")]
    assert suite.aggregate_status(claimed_fail) == "FLAGGED"
    assert suite.exit_code(claimed_fail) == 0

    failing = passing + [_fake_report("NOT_CONVERGED")]
    assert suite.aggregate_status(failing) == "NOT_CONVERGED"
    assert suite.exit_code(failing) == 1
    assert suite.exit_code([_fake_report("ERROR")]) == 1

    counts = suite.status_counts(failing)
    assert counts["PASS"] == 1 and counts["NOT_CONVERGED"] == 1 and counts["FAIL"] == 0
    assert suite.aggregate_status([]) == "PASS"
    print("✅ Aggregate status and exit codes correct")


if __name__ == "__main__":
    print("🚀 IDENTITY SUITE TESTS")
    print("=" * 60)
    test_registry_contents()
    test_filters()
    test_parameter_parsing()
    test_verify_exact()
    test_verify_wrong_kind()
    test_series_closed_forms()
    test_series_against_quadrature()
    test_claimed_records_are_flagged()
    test_parameter_ranges()
    test_unexpected_errors_become_error_reports()
    test_series_suite_passes()
    test_series_constants()
    test_tolerance_resolution()
    test_aggregation()
    print("\n" + "=" * 60)
    print("✅ All identity suite tests passed!")
