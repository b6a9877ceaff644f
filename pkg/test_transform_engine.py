#!/usr/bin/env python3
"""
Test the series engine: inner binomial sums, acceleration, tails and Theorem 1
"""

import math
import sys
from fractions import Fraction

import pytest

# Add current directory to path for imports
sys.path.append('.')

import transform_engine as te
from errors import CancellationWarning, DomainError

LN2 = math.log(2.0)
ZETA2 = math.pi ** 2 / 6


def _partials(term, count, start=0):
    total = 0.0
    out = []
    for n in range(start, start + count):
        total += term(n)
        out.append(total)
    return out


def test_acceleration_methods():
    print("🧪 TESTING PARTIAL-SUM ACCELERATION")
    alternating = lambda n: (-1) ** n / (n + 1)

    wynn = te.accelerate(_partials(alternating, 20), "wynn-epsilon")
    assert abs(wynn.value - LN2) < 1e-10
    assert wynn.method == "wynn-epsilon"

    levin = te.accelerate(_partials(lambda n: 1.0 / n ** 2, 20, start=1), "levin")
    assert abs(levin.value - ZETA2) < 1e-7

    richardson = te.accelerate(_partials(lambda n: 1.0 / n ** 2, 64, start=1), "richardson")
    assert abs(richardson.value - ZETA2) < 1e-6

    euler = te.accelerate(_partials(alternating, 40), "euler")
    assert abs(euler.value - LN2) < 1e-9

    # raw partial sums of Σ1/k² are still off by ~1/N
    plain = te.accelerate(_partials(lambda n: 1.0 / n ** 2, 20, start=1), "none")
    assert abs(plain.value - ZETA2) > 1e-2
    print("✅ Wynn, Levin, Richardson and Euler reach their limits")


def test_acceleration_edge_cases():
    print("🧪 TESTING ACCELERATION EDGE CASES")
    with pytest.raises(DomainError):
        te.accelerate([1.0, 2.0, 3.0])
    with pytest.raises(DomainError):
        te.accelerate([1.0, 2.0, 3.0, 4.0], "bogus")
    with pytest.raises(DomainError):
        te.accelerate([1.0, 2.0, float("nan"), 4.0])
    constant = te.accelerate([1.5, 1.5, 1.5, 1.5], "wynn-epsilon")
    assert constant.value == 1.5 and constant.error_estimate == 0.0
    print("✅ Edge cases handled")


def test_logarithmic_convergence_is_flagged():
    """Wynn cannot settle Σ1/n², so its error estimate must cover the tail"""
    print("🧪 TESTING ACCELERATION ON SLOWLY CONVERGING SUMS")
    slow = _partials(lambda n: 1.0 / n ** 2, 50, start=1)
    wynn = te.accelerate(slow, "wynn-epsilon")
    assert wynn.flagged
    assert wynn.error_estimate >= abs(wynn.value - ZETA2), (wynn.value, wynn.error_estimate)
    assert "logarithmically" in wynn.message

    geometric = te.accelerate(_partials(lambda n: 0.9 ** n, 20), "wynn-epsilon")
    assert not geometric.flagged
    assert abs(geometric.value - 10.0) < 1e-8
    alternating = te.accelerate(_partials(lambda n: (-1) ** n / (n + 1), 20), "wynn-epsilon")
    assert not alternating.flagged

    zeta2 = te.TermGenerator(term=lambda n: 1.0 / n ** 2, decay="monotone", start=1, name="zeta2")
    result = te.sum_series(zeta2, accel="wynn-epsilon", tol=1e-8)
    assert not result.converged
    assert "logarithmically" in result.message
    print("✅ Slow convergence reported instead of a false digit count")


def test_sum_series_geometric_and_finite():
    print("🧪 TESTING RAW AND FINITE SUMMATION")
    geometric = te.TermGenerator(term=lambda n: 0.5 ** n, decay="geometric", name="half")
    result = te.sum_series(geometric, accel="auto")
    assert result.method == "raw"
    assert result.converged
    assert abs(result.value - 2.0) < 1e-14

    finite = te.TermGenerator(term=lambda n: n, start=1, last=10)
    result = te.sum_series(finite)
    assert result.method == "finite"
    assert result.value == 55.0 and result.error_estimate == 0.0

    with pytest.raises(DomainError):
        te.sum_series(geometric, accel="bogus")
    with pytest.raises(DomainError):
        te.sum_series(geometric, tol=0.0)
    with pytest.raises(DomainError):
        te.TermGenerator(term=lambda n: n, decay="bogus")
    print("✅ Raw and finite sums behave")


def test_boole_and_euler_maclaurin_tails():
    print("🧪 TESTING SMOOTH TAIL SUMMATION")
    alternating = te.TermGenerator(term=lambda n: (-1) ** n / (n + 1), decay="alternating",
                                   smooth=lambda t: 1.0 / (t + 1), name="ln2")
    result = te.sum_series(alternating, accel="auto", tol=1e-9)
    assert result.method == "boole"
    assert abs(result.value - LN2) < 1e-9

    monotone = te.TermGenerator(term=lambda n: 1.0 / n ** 2, decay="monotone", start=1,
                                smooth=lambda t: 1.0 / t ** 2, name="zeta2")
    result = te.sum_series(monotone, accel="auto", tol=1e-9)
    assert result.method == "euler-maclaurin"
    assert result.converged
    assert abs(result.value - ZETA2) < 1e-9
    print("✅ Boole and Euler–Maclaurin tails converge")


def test_alternating_binomial_sum():
    print("🧪 TESTING INNER BINOMIAL SUMS")
    exact = te.alternating_binomial_sum(lambda k: Fraction(1, k + 1), 10)
    assert exact.is_exact
    assert exact.exact == Fraction(1, 11)

    with pytest.warns(CancellationWarning):
        inexact = te.alternating_binomial_sum(lambda k: 1.0 / (k + 1), 60)
    assert not inexact.is_exact
    assert inexact.flagged
    assert inexact.cancellation > te.CANCELLATION_THRESHOLD

    with pytest.raises(DomainError):
        te.alternating_binomial_sum(lambda k: Fraction(1), -1)
    print("✅ Exact path exact, float path monitored")


def test_generators():
    print("🧪 TESTING PROPOSITION GENERATORS")
    gen = te.prop_a_generator(lambda k: Fraction(1, k + 1))
    # c_3/3! = 1/24 and the inner sum is 1/4
    assert gen.term(3) == -1 / 96
    b = te.prop_b_generator(lambda k: Fraction(1, k + 1), 2)
    assert b.start == 2
    with pytest.raises(DomainError):
        te.prop_b_series(0, b)
    assert te.gregory_float(2) == -1 / 12
    assert te.stirling_ratio(1, 2) == 0.0
    print("✅ Generators produce the expected terms")


def test_theorem1_closed_form():
    print("🧪 TESTING THEOREM 1")
    for q in range(4):
        closed = te.theorem1_closed_form(0.5, q)
        assert te.theorem1_closed_form(0.5, q, variant="shifted") == pytest.approx(closed, rel=1e-12)
        quad = te.theorem1_quadrature(0.5, q)
        assert quad.converged
        assert abs(closed - quad.value) < 1e-10, q
        series = te.sum_series(te.theorem1_terms(0.5, q), tol=1e-12)
        assert abs(closed - series.value) < 1e-10, q
    # q = 0 is −z/ln(1−z)
    assert te.theorem1_closed_form(0.5, 0) == pytest.approx(0.5 / LN2, rel=1e-13)
    with pytest.raises(DomainError):
        te.theorem1_closed_form(1.5, 1)
    with pytest.raises(DomainError):
        te.theorem1_closed_form(0.5, 1, variant="other")
    print("✅ Closed form, quadrature and series agree")


def test_prop1():
    print("🧪 TESTING PROPOSITION 1")
    z = 0.3
    assert te.prop1_rhs(z, 0, 1) == pytest.approx(math.log(1 - z), rel=1e-13)
    assert te.prop1_rhs(z, 1, 1) == pytest.approx(-z / (1 - z), rel=1e-13)
    for q, m in ((0, 1), (1, 1), (2, 2)):
        series = te.sum_series(te.prop1_terms(z, q, m), tol=1e-12)
        assert abs(series.value - te.prop1_rhs(z, q, m)) < 1e-10, (q, m)
    print("✅ Proposition 1 series match the derivative formula")


def test_tail_estimate():
    print("🧪 TESTING TAIL BOUNDS")
    assert te.tail_estimate("alternating", 5, -0.3) == 0.3
    assert te.tail_estimate("geometric", 10, 1.0, ratio=0.5) == 1.0
    assert te.tail_estimate("geometric", 10, 1.0, ratio=1.0) == math.inf
    assert te.tail_estimate("monotone", 10, 0.01, power=2.0) == pytest.approx(0.1)
    with pytest.raises(DomainError):
        te.tail_estimate("monotone", 0, 1.0)
    print("✅ Tail bounds computed")


if __name__ == "__main__":
    print("🚀 TRANSFORM ENGINE TESTS")
    print("=" * 60)
    test_acceleration_methods()
    test_acceleration_edge_cases()
    test_logarithmic_convergence_is_flagged()
    test_sum_series_geometric_and_finite()
    test_boole_and_euler_maclaurin_tails()
    test_alternating_binomial_sum()
    test_generators()
    test_theorem1_closed_form()
    test_prop1()
    test_tail_estimate()
    print("\n" + "=" * 60)
    print("✅ All transform engine tests passed!")
