#!/usr/bin/env python3
"""
Exact Identities Module
Finite identities checked in exact rational arithmetic: binomial transforms,
Cauchy/Stirling sums and partial-fraction decompositions
"""

from fractions import Fraction as F
from math import comb, factorial
from typing import List

import exact_kernel as ek
from identity_records import (EvalContext, IdentityRecord, Params, PointValues, closed_interval, grid,
                              integers_between, rationals_above)

ALPHAS = (F(1, 4), F(1, 3), F(1, 2), F(3, 4))
X_GRID = (F(0), F(1, 2), F(1), F(3, 2), F(7, 3))


def _x_points(degree: int) -> List[F]:
    """X_GRID plus (2j+1)/5 extras so a degree-`degree` rational identity is pinned down"""
    points = list(X_GRID)
    for j in range(degree + 1):
        x = F(2 * j + 1, 5)
        if x not in points:
            points.append(x)
    return points


def _rising(x, n):
    return ek.rising(x, n)


def _harmonic_gap(n: int, r: int) -> F:
    """(H_{n+r} − H_{r−1})² − (H^{(2)}_{n+r} − H^{(2)}_{r−1})"""
    h1 = ek.harmonic(n + r) - ek.harmonic(r - 1)
    h2 = ek.harmonic(n + r, 2) - ek.harmonic(r - 1, 2)
    return h1 * h1 - h2


# =============================================================================
# EVALUATORS
# =============================================================================

def _b7a(p: Params, ctx: EvalContext = None) -> PointValues:
    n, q, alpha = p["n"], p["q"], F(p["alpha"])
    lhs = ek.binomial_transform(lambda k: comb(k, q) * alpha ** k, n)
    rhs = (-alpha) ** q * (1 - alpha) ** (n - q) * ek.binomial(n, q)
    return PointValues(lhs, F(rhs))


def _b10(p: Params, ctx: EvalContext = None) -> PointValues:
    n = p["n"]
    lhs = ek.binomial_transform(lambda k: F(comb(2 * k, k), 4 ** k), n)
    return PointValues(lhs, F(comb(2 * n, n), 4 ** n))


def _e109(p: Params, ctx: EvalContext = None) -> PointValues:
    n, q = p["n"], p["p"]
    lhs = ek.binomial_transform(lambda k: comb(q + k, k), n)
    return PointValues(lhs, F((-1) ** n * ek.binomial(q, n)))


def _b18(p: Params, ctx: EvalContext = None) -> PointValues:
    q = p["p"]
    lhs = sum((ek.gregory(n) * comb(q, n) for n in range(q + 1)), F(0))
    rhs = ek.integrate_poly(ek.shifted_product_poly(1, q)) / factorial(q)
    stirling_sum = sum((F((-1) ** j * ek.stirling1(q + 1, j + 1), j + 1) for j in range(q + 1)), F(0))
    return PointValues(
        lhs, rhs,
        checks={"stirling-form": (-1) ** q * stirling_sum / factorial(q)},
        printed=(-1) ** (q + 1) * stirling_sum,
    )


def _l14(p: Params, ctx: EvalContext = None) -> PointValues:
    q = p["p"]
    lhs = sum((ek.gregory(n) * comb(q, n) for n in range(q + 1)), F(0))
    return PointValues(lhs, F((-1) ** q, factorial(q)) * ek.cauchy2_at_negative(q, 1))


def _l15(p: Params, ctx: EvalContext = None) -> PointValues:
    m, q = p["m"], p["p"]
    lhs = sum((F(ek.stirling1(n, m), factorial(n)) * comb(q, n) for n in range(m, q + 1)), F(0))
    rhs = F((-1) ** m, factorial(m)) * ek.bell_at_harmonic(m, q)
    return PointValues(lhs, rhs)


def _ex3(p: Params, ctx: EvalContext = None) -> PointValues:
    m, q = p["m"], p["p"]
    H = ek.harmonic
    if m == 1:
        lhs = sum((F((-1) ** (n + 1) * comb(q, n), n) for n in range(1, q + 1)), F(0))
        return PointValues(lhs, H(q))
    if m == 2:
        lhs = sum(((-1) ** (n + 1) * comb(q + 1, n + 1) * H(n) / (n + 1) for n in range(1, q + 1)), F(0))
        return PointValues(lhs, (H(q + 1) ** 2 - H(q + 1, 2)) / 2)
    lhs = sum(
        ((-1) ** (n - 1) * comb(q + 2, n + 2) * (H(n + 1) ** 2 - H(n + 1, 2)) / (n + 2) for n in range(1, q + 1)),
        F(0),
    )
    h1, h2, h3 = H(q + 2), H(q + 2, 2), H(q + 2, 3)
    return PointValues(lhs, (h1 ** 3 - 3 * h1 * h2 + 2 * h3) / 3, printed=(h1 ** 3 - 3 * h1 * h2 + h3) / 3)


def _prop4(p: Params, ctx: EvalContext = None) -> PointValues:
    k, q = p["k"], p["q"]
    rhs = sum(
        (F(ek.rstirling1(q, k, n) * ek.stirling1(q, m), n + m + 1) for n in range(k + 1) for m in range(q + 1)),
        F(0),
    )
    return PointValues(ek.cauchy(k + q), rhs)


def _e15(p: Params, ctx: EvalContext = None) -> PointValues:
    q, x = p["q"], F(p["x"])
    lhs = 1 / _rising(x + 1, q + 1)
    rhs = sum((F((-1) ** (j - 1) * comb(q + 1, j) * j) / (x + j) for j in range(1, q + 2)), F(0)) / factorial(q + 1)
    return PointValues(lhs, rhs)


def _e11a(p: Params, ctx: EvalContext = None) -> PointValues:
    r, x = p["r"], F(p["x"])
    lhs = 1 / ((x + 1) * _rising(x + 1, r))
    rhs = 1 / (factorial(r - 1) * (x + 1) ** 2) - F(r - 1, factorial(r)) / (x + 1)
    for j in range(2, r + 1):
        rhs += F(comb(r, j) * (-1) ** (j + 1), (j - 1) * factorial(r)) * (1 / (x + 1) - j / (x + j))
    return PointValues(lhs, rhs)


def _e8(p: Params, ctx: EvalContext = None) -> PointValues:
    n, r, l = p["n"], p["r"], p["l"]
    lhs = ek.binomial_transform(lambda k: F(1, _rising(k + l + 1, r)), n)
    rhs = F(1, factorial(r - 1) * (n + r) * comb(n + r + l, l))
    printed = F(1, factorial(r - 1) * (n + r) * comb(n + l, l))
    return PointValues(lhs, rhs, printed=printed)


def _e4(p: Params, ctx: EvalContext = None) -> PointValues:
    n, r = p["n"], p["r"]
    lhs = ek.binomial_transform(lambda k: F(1, (k + 1) * _rising(k + 1, r)), n)
    return PointValues(lhs, ek.hyperharmonic(n + 1, r) / _rising(n + 1, r))


def _e9(p: Params, ctx: EvalContext = None) -> PointValues:
    n, r = p["n"], p["r"]
    lhs = ek.binomial_transform(lambda k: ek.harmonic(k) / _rising(k + 1, r), n)
    return PointValues(lhs, -ek.hyperharmonic(n, r) / _rising(n + 1, r))


def _ex10(p: Params, ctx: EvalContext = None) -> PointValues:
    n, r = p["n"], p["r"]
    lhs = -ek.binomial_transform(lambda k: ek.harmonic(k) / ((k + 1) * _rising(k + 1, r)), n)
    rhs = _harmonic_gap(n, r) / (2 * (n + 1) * factorial(r - 1))
    return PointValues(lhs, rhs)


def _ex11(p: Params, ctx: EvalContext = None) -> PointValues:
    n, r = p["n"], p["r"]
    lhs = ek.binomial_transform(lambda k: F(k, (k + r - 1) ** 2), n)
    return PointValues(lhs, -ek.hyperharmonic(n, r) / comb(n + r - 1, n) ** 2)


def _b16(p: Params, ctx: EvalContext = None) -> PointValues:
    n = p["n"]
    lhs = sum((F((-1) ** k * comb(n, k) * (1 - 2 ** k), k) for k in range(1, n + 1)), F(0))
    return PointValues(lhs, ek.skew_harmonic(n))


# =============================================================================
# CATALOG
# =============================================================================

def exact_records() -> List[IdentityRecord]:
    small = range(13)
    e15_grid = [{"q": q, "x": x} for q in small for x in _x_points(q + 1)]
    e11a_grid = [{"r": r, "x": x} for r in range(1, 6) for x in _x_points(r + 1)]

    def record(id, ref, points, evaluate, note="", domains=None):
        return IdentityRecord(id, "exact-finite", ref, points, evaluate, 0.0, note, domains=domains or {})

    return [
        record("EX-B7a", 'Σ_k C(n,k)(−1)^k C(k,q)α^k = (−α)^q(1−α)^{n−q}C(n,q), "where 0≤α≤1"',
               grid(n=small, q=small, alpha=ALPHAS), _b7a, domains={"alpha": closed_interval(0, 1)}),
        record("EX-B10", 'Σ_k C(n,k)(−1)^k C(2k,k)/4^k = C(2n,n)/4^n, "use the central binomial coefficients"',
               grid(n=small), _b10),
        record("EX-109", 'Σ_k (−1)^k C(n,k)C(p+k,k) = (−1)^n C(p,n), "where p≥0 is an integer"',
               grid(n=small, p=small), _e109),
        record("EX-B18", '∫₀¹ C(p+x,p)dx = Σ_n c_n/n! C(p,n)',
               grid(p=small), _b18,
               note="the displayed Stirling-sum intermediate lacks the factor (−1)^p/p!; shown as printed"),
        record("EX-L14", 'Σ_n c_n/n! C(p,n) = (−1)^p/p! ĉ_p(−1)', grid(p=small), _l14),
        record("EX-L15", 'Σ_{n=m}^{p} s(n,m)/n! C(p,n) = (−1)^m/m! Y_m(−0!H_p,…,−(m−1)!H_p^{(m)})',
               grid(m=range(5), p=small), _l15),
        record("EX-EX3-M", 'Σ C(p,n)(−1)^{n+1}/n = H_p and its m=2,3 companions',
               grid(m=(1, 2, 3), p=range(1, 13)), _ex3,
               note="m=3 holds with +2H^{(3)}; the displayed +H^{(3)} is shown as printed",
               domains={"m": integers_between(1, 3)}),
        record("EX-PROP4", 'c_{k+q} = Σ_n Σ_m s_q(k,n)s(q,m)/(n+m+1)',
               grid(k=range(9), q=range(9)), _prop4),
        record("EX-15", '1/((x+1)⋯(x+q+1)) = 1/(q+1)! Σ_j (−1)^{j−1}C(q+1,j) j/(x+j)', e15_grid, _e15,
               domains={"x": rationals_above(-1)}),
        record("EX-11a", '1/((x+1)²(x+2)⋯(x+r)) partial fractions, "1/((r−1)!(x+1)²)"', e11a_grid, _e11a,
               domains={"x": rationals_above(-1)}),
        record("EX-8", 'Σ_k C(n,k)(−1)^k/((k+l+1)⋯(k+l+r)), "reciprocal binomial coefficients"',
               grid(n=small, r=range(1, 6), l=range(5)), _e8,
               note="holds with C(n+r+l,l) in the denominator; the displayed C(n+l,l) agrees only at l=0"),
        record("EX-4", 'h_{n+1}^{(r)}/((n+1)⋯(n+r)) = Σ_k C(n,k)(−1)^k/((k+1)²(k+2)⋯(k+r)), "together with the binomial identity"',
               grid(n=small, r=range(1, 6)), _e4),
        record("EX-9", '−h_n^{(r)}/((n+1)⋯(n+r)) = Σ_k C(n,k)(−1)^k H_k/((k+1)⋯(k+r))',
               grid(n=small, r=range(1, 6)), _e9),
        record("EX-EX10", 'Σ_k C(n,k)(−1)^{k+1}H_k/((k+1)(k+1)^{(r)}), "and use the identity"',
               grid(n=range(11), r=range(1, 6)), _ex10),
        record("EX-EX11", '−h_n^{(r)}/C(n+r−1,n)² = Σ_k (−1)^k C(n,k) k/(k+r−1)², "Let r be a integer >1"',
               grid(n=small, r=range(2, 6)), _ex11),
        record("EX-B16", 'Σ_{k=1}^{n} C(n,k)(−1)^k (1−2^k)/k = H_n^-, "skew-harmonic numbers"',
               grid(n=small), _b16),
    ]
