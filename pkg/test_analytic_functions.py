#!/usr/bin/env python3
"""
Test the double-precision special functions, quadrature and power series
"""

import math
import sys
import warnings
from fractions import Fraction

import numpy as np
import pytest

# Add current directory to path for imports
sys.path.append('.')

import analytic_functions as af
import exact_kernel as ek
from errors import DomainError


def test_harmonic_real_matches_exact():
    """ψ(n+1)+γ = H_n for n ≤ 20"""
    print("🧪 TESTING DIGAMMA HARMONIC EXTENSION")
    for n in range(21):
        assert abs(af.harmonic_real(n) - float(ek.harmonic(n))) < 1e-12, n
        assert abs(af.harmonic_real(n, 2) - float(ek.harmonic(n, 2))) < 1e-12, n
    assert abs(af.digamma(1.0) + af.EULER_GAMMA) < 1e-15
    print("✅ harmonic_real agrees with exact harmonic numbers")


def test_skew_gap():
    """H_n^- − ln 2 = (−1)^{n+1} β(n)"""
    print("🧪 TESTING SKEW-HARMONIC GAP")
    for n in range(12):
        expected = float(ek.skew_harmonic(n)) - af.LN2
        assert abs((-1) ** (n + 1) * af.skew_gap(n) - expected) < 1e-14, n
    print("✅ skew_gap reproduces H_n^- − ln 2")


def test_ein():
    """Ein against its defining power series"""
    print("🧪 TESTING Ein")
    for z in (-math.log(2.0), 0.5, 1.5, 3.0, 7.0):
        series = math.fsum((-1) ** (n - 1) * z ** n / (math.factorial(n) * n) for n in range(1, 80))
        assert af.ein(z) == pytest.approx(series, rel=1e-12, abs=1e-14), z
    assert af.ein(0.0) == 0.0
    with pytest.raises(DomainError):
        af.ein(100.0)
    print("✅ Ein matches the direct series")


def test_gregory_abs_matches_exact():
    """|c_n/n!| from the integral representation"""
    print("🧪 TESTING GREGORY COEFFICIENT EXTENSION")
    for n in range(1, 61):
        exact = abs(float(ek.gregory(n)))
        assert af.gregory_abs(n) == pytest.approx(exact, rel=1e-9), n
    vector = af.gregory_abs(np.array([1.0, 2.0, 3.0]))
    assert vector.shape == (3,)
    assert vector[0] == pytest.approx(0.5, rel=1e-12)
    with pytest.raises(DomainError):
        af.gregory_abs(0.5)
    print("✅ gregory_abs agrees with exact Cauchy numbers")


def test_unsigned_stirling_ratio():
    print("🧪 TESTING |s(n,m)|/n! EXTENSION")
    for m in range(1, 5):
        for n in range(1, 31):
            exact = abs(float(Fraction(ek.stirling1(n, m), math.factorial(n))))
            assert af.unsigned_stirling_ratio(n, m) == pytest.approx(exact, rel=1e-10, abs=1e-14), (n, m)
    print("✅ unsigned_stirling_ratio matches Stirling numbers")


def test_central_binomial():
    print("🧪 TESTING CENTRAL BINOMIAL EXTENSION")
    for n in range(31):
        exact = math.comb(2 * n, n) / 4 ** n
        assert af.central_binomial_real(n) == pytest.approx(exact, rel=1e-12), n
    with pytest.raises(DomainError):
        af.central_binomial_real(-0.75)
    print("✅ central_binomial_real matches C(2n,n)/4^n")


def test_power_series_against_numerical_differentiation():
    """Taylor coefficients of C(2x,x)4^{−x}: power series vs FFT contour, orders ≤ 5"""
    print("🧪 TESTING POWER SERIES COEFFICIENTS")
    series = af.central_binomial_series(8)
    contour = af.contour_taylor(af.central_binomial_complex, 8)
    assert series.coeffs[0] == pytest.approx(1.0)
    assert series.coeffs[1] == pytest.approx(-math.log(4.0), abs=1e-13)
    for m in range(6):
        assert abs(series.coeffs[m] - contour[m]) < 1e-6, m
    # first derivative by Richardson-refined finite differences
    derivative = af.richardson_derivative(lambda x: float(af.central_binomial_real(x)), 0.0, order=1, h=0.05)
    assert derivative == pytest.approx(-math.log(4.0), abs=1e-6)
    print("✅ Power series, contour and finite differences agree")


def test_power_series_guards():
    print("🧪 TESTING POWER SERIES GUARDS")
    with pytest.raises(DomainError):
        af.ps_exp(af.PowerSeries(np.array([1.0, 1.0])))
    with pytest.raises(DomainError):
        af.ps_loggamma_shifted(af.MAX_SERIES_ORDER + 1)
    exp_x = af.ps_exp(af.PowerSeries(np.array([0.0, 1.0, 0.0, 0.0])))
    assert np.allclose(exp_x.coeffs, [1.0, 1.0, 0.5, 1.0 / 6.0])
    print("✅ Power series guards hold")


def test_quadrature():
    print("🧪 TESTING ADAPTIVE QUADRATURE")
    result = af.quadrature(lambda x: x * x, tol=1e-12)
    assert result.converged
    assert result.value == pytest.approx(1.0 / 3.0, abs=1e-13)
    b11 = af.quadrature(af.central_binomial_real, tol=1e-11)
    assert abs(b11.value - 0.6703837612) < 1e-8
    psi = af.quadrature(lambda x: float(af.harmonic_real(x)) / (x + 1), tol=1e-12)
    assert abs(psi.value - 0.3606201929) < 1e-8
    with pytest.raises(DomainError):
        af.quadrature(lambda x: x, tol=0.0)
    print("✅ Quadrature reproduces the closing constants")


def test_log_gamma_recurrence():
    """Γ(x+1) = xΓ(x) on [0.5, 50] and Γ(1/2) = √π"""
    print("🧪 TESTING LOG-GAMMA RECURRENCE")
    for x in np.linspace(0.5, 50.0, 100):
        assert math.exp(af.log_gamma(x + 1)) == pytest.approx(x * math.exp(af.log_gamma(x)), rel=1e-11), x
    for n in range(21):
        assert math.exp(af.log_gamma(n + 1.0)) == pytest.approx(math.factorial(n), rel=1e-12), n
    assert af.log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), abs=1e-14)
    print("✅ log_gamma satisfies the functional equation")


def test_digamma_recurrence_and_series():
    """ψ(x+1) − ψ(x) = 1/x and ψ(1+x)+γ = Σ(−1)^{n+1} ζ(n+1) x^n"""
    print("🧪 TESTING DIGAMMA RECURRENCE")
    for x in np.linspace(0.5, 50.0, 100):
        assert abs(af.digamma(x + 1) - af.digamma(x) - 1.0 / x) < 1e-12, x
    x = 0.5
    series = math.fsum((-1) ** (n + 1) * af.zeta_int(n + 1) * x ** n for n in range(1, 61))
    assert abs(af.digamma(1.0 + x) + af.EULER_GAMMA - series) < 1e-10
    assert abs(series - (2.0 - 2.0 * math.log(2.0))) < 1e-10
    print("✅ digamma recurrence and Maclaurin series agree")


def test_zeta_values():
    print("🧪 TESTING ζ AT INTEGERS")
    assert abs(af.zeta_int(2) - math.pi ** 2 / 6) < 1e-13
    assert abs(af.zeta_int(4) - math.pi ** 4 / 90) < 1e-13
    n = 1000
    tail = 1.0 / (2 * n ** 2) - 1.0 / (2 * n ** 3) + 1.0 / (4 * n ** 4)
    partial = math.fsum(1.0 / k ** 3 for k in range(1, n + 1))
    assert abs(af.zeta_int(3) - (partial + tail)) < 1e-13
    print("✅ ζ(2), ζ(3), ζ(4) correct")


def test_binomial_integrals_give_gregory_coefficients():
    """∫₀¹ C(x,q) dx = c_q/q!"""
    print("🧪 TESTING ∫ C(x,q) dx")
    for q in range(11):
        result = af.quadrature(lambda x, q=q: float(af.binom_real(x, q)), tol=1e-13)
        assert result.converged, q
        assert abs(result.value - float(ek.gregory(q))) < 1e-12, q
    print("✅ Binomial integrals match Cauchy numbers for q ≤ 10")


def test_quadrature_error_estimate_bounds_polynomial_error():
    print("🧪 TESTING QUADRATURE ERROR ESTIMATES")
    for k in range(11):
        result = af.quadrature(lambda x, k=k: (k + 1) * x ** k, tol=1e-12)
        assert result.error_estimate + 1e-16 >= abs(result.value - 1.0), k
    coeffs = [1, -3, 0, 0, 5, 0, 0, 0, 0, -7, 11]
    exact = sum((Fraction(c, j + 1) for j, c in enumerate(coeffs)), Fraction(0))
    mixed = af.quadrature(lambda x: sum(c * x ** j for j, c in enumerate(coeffs)), tol=1e-12)
    assert mixed.error_estimate + 1e-16 >= abs(mixed.value - float(exact))
    assert mixed.value == pytest.approx(float(exact), abs=1e-13)
    print("✅ Reported error bounds the true error up to degree 10")


def test_power_series_product_algebra():
    print("🧪 TESTING POWER SERIES PRODUCT")
    rng = np.random.default_rng(7)
    a, b, c = (af.PowerSeries(rng.normal(size=9)) for _ in range(3))
    assert np.allclose(af.ps_mul(a, b).coeffs, af.ps_mul(b, a).coeffs, atol=1e-12)
    left = af.ps_mul(af.ps_mul(a, b), c)
    right = af.ps_mul(a, af.ps_mul(b, c))
    assert np.allclose(left.coeffs, right.coeffs, atol=1e-12)
    short = af.PowerSeries(rng.normal(size=6))
    assert af.ps_mul(a, short).order == 5
    assert (a * short).order == af.ps_mul(short, a).order
    print("✅ Products are commutative and associative")


def test_power_series_derivatives_at_zero():
    """exp(x + x²/2) has derivatives 1, 2, 4 at 0"""
    print("🧪 TESTING DERIVATIVES FROM COEFFICIENTS")
    series = af.ps_exp(af.PowerSeries(np.array([0.0, 1.0, 0.5, 0.0, 0.0, 0.0])))
    f = lambda x: math.exp(x + x * x / 2)
    for m, exact in ((1, 1.0), (2, 2.0), (3, 4.0)):
        assert series.derivative_at_zero(m) == pytest.approx(exact, abs=1e-12), m
        assert abs(series.derivative_at_zero(m) - af.richardson_derivative(f, 0.0, order=m)) < 1e-6, m
    print("✅ m!·a_m matches Richardson differences")


def test_gregory_abs_is_warning_free():
    print("🧪 TESTING GREGORY QUADRATURE NUMERICS")
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        values = af.gregory_abs(np.arange(1.0, 200.0))
    assert np.all(np.isfinite(values)) and np.all(values > 0)
    print("✅ No floating-point warnings for t in [1, 199]")


def test_domain_errors():
    print("🧪 TESTING DOMAIN ERRORS")
    with pytest.raises(DomainError):
        af.digamma(0.0)
    with pytest.raises(DomainError):
        af.harmonic_real(-1.0)
    with pytest.raises(DomainError):
        af.zeta_int(1)
    with pytest.raises(ValueError):
        af.log_gamma(-2.0)
    print("✅ Domain errors raised")


def test_extended_precision_theorem1_A():
    pytest.importorskip("mpmath")
    print("🧪 TESTING EXTENDED PRECISION")
    import transform_engine as te
    for k in range(5):
        assert af.mp_theorem1_A(0.5, k) == pytest.approx(te.theorem1_A(0.5, k, extended=False), rel=1e-10)
    print("✅ mpmath and double precision agree")


if __name__ == "__main__":
    print("🚀 ANALYTIC FUNCTION TESTS")
    print("=" * 60)
    test_harmonic_real_matches_exact()
    test_skew_gap()
    test_ein()
    test_gregory_abs_matches_exact()
    test_unsigned_stirling_ratio()
    test_central_binomial()
    test_power_series_against_numerical_differentiation()
    test_power_series_guards()
    test_quadrature()
    test_log_gamma_recurrence()
    test_digamma_recurrence_and_series()
    test_zeta_values()
    test_binomial_integrals_give_gregory_coefficients()
    test_quadrature_error_estimate_bounds_polynomial_error()
    test_power_series_product_algebra()
    test_power_series_derivatives_at_zero()
    test_gregory_abs_is_warning_free()
    test_domain_errors()
    test_extended_precision_theorem1_A()
    print("\n" + "=" * 60)
    print("✅ All analytic function tests passed!")
