#!/usr/bin/env python3
"""
Exact Kernel Module
Big-rational computation of the special-number families: binomials, Stirling and
r-Stirling numbers, Cauchy numbers, harmonic-type numbers and Bell polynomials.

Every value is an int or a fractions.Fraction; nothing on these paths touches floats.
"""

import threading
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Dict, List, Sequence, Tuple, Union

from config import config, get_logger
from errors import DomainError, KernelBoundsError

Rational = Union[int, Fraction]

logger = get_logger("ExactKernel")


class SequenceCache:
    """Thread-safe memo of growing tables keyed by (family, parameters)"""

    def __init__(self):
        self._tables: Dict[Tuple, list] = {}
        self._lock = threading.RLock()
        self.hits = 0
        self.misses = 0

    def extend(self, key: Tuple, upto: int, step: Callable[[list, int], object], seed: list) -> list:
        """Return the table for key grown to index `upto` with step(table, i) -> entry i"""
        table = self._tables.get(key)
        if table is not None and len(table) > upto:
            self.hits += 1
            return table
        with self._lock:
            table = self._tables.get(key)
            if table is None:
                table = list(seed)
            if len(table) <= upto:
                self.misses += 1
                grown = list(table)
                for i in range(len(grown), upto + 1):
                    grown.append(step(grown, i))
                # publish a new list so lock-free readers never see a partial row
                self._tables[key] = grown
                table = grown
            return table

    def clear(self):
        with self._lock:
            self._tables.clear()
            self.hits = 0
            self.misses = 0

    def statistics(self) -> Dict[str, int]:
        with self._lock:
            return {
                "tables": len(self._tables),
                "entries": sum(len(t) for t in self._tables.values()),
                "hits": self.hits,
                "misses": self.misses,
            }


cache = SequenceCache()


def _check_index(family: str, index: int, triangle: bool = False):
    bound = config.get("kernel_max_triangle" if triangle else "kernel_max_index")
    if index > bound:
        raise KernelBoundsError(family, index, bound)


def _require_nonnegative(family: str, **values):
    for name, value in values.items():
        if value < 0:
            raise DomainError(f"{family}: {name} must be ≥ 0 (got {value})")


# =============================================================================
# BINOMIALS AND POLYNOMIAL HELPERS
# =============================================================================

def binomial(n: int, k: int) -> int:
    """C(n,k); 0 outside 0 ≤ k ≤ n"""
    if n < 0 or k < 0 or k > n:
        return 0
    return comb(n, k)


def falling(x: Rational, n: int) -> Rational:
    """x(x−1)⋯(x−n+1)"""
    result: Rational = 1
    for j in range(n):
        result *= x - j
    return result


def rising(x: Rational, n: int) -> Rational:
    """x(x+1)⋯(x+n−1)"""
    result: Rational = 1
    for j in range(n):
        result *= x + j
    return result


def binomial_rational(x: Rational, q: int) -> Rational:
    """C(x,q) for rational x"""
    if q < 0:
        return 0
    return Fraction(falling(x, q), factorial(q))


def poly_mul(a: Sequence[Rational], b: Sequence[Rational]) -> List[Rational]:
    """Product of coefficient lists (index j = coefficient of x^j)"""
    out: List[Rational] = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def shifted_product_poly(shift: Rational, n: int, step: int = 1) -> List[Rational]:
    """Coefficients of (x+shift)(x+shift+step)⋯(x+shift+(n−1)step)"""
    poly: List[Rational] = [1]
    for j in range(n):
        poly = poly_mul(poly, [shift + j * step, 1])
    return poly


def falling_poly(n: int) -> List[Rational]:
    """Coefficients of x(x−1)⋯(x−n+1), expanded by direct multiplication"""
    return shifted_product_poly(0, n, step=-1)


def eval_poly(coeffs: Sequence[Rational], x: Rational) -> Rational:
    result: Rational = 0
    for c in reversed(coeffs):
        result = result * x + c
    return result


def integrate_poly(coeffs: Sequence[Rational], lower: Rational = 0, upper: Rational = 1) -> Fraction:
    """Exact ∫ of a polynomial between rational bounds"""
    total = Fraction(0)
    for k, c in enumerate(coeffs):
        if c:
            total += Fraction(c, k + 1) * (Fraction(upper) ** (k + 1) - Fraction(lower) ** (k + 1))
    return total


def binomial_transform(f: Callable[[int], Rational], n: int) -> Fraction:
    """Σ_{k=0}^{n} C(n,k)(−1)^k f(k) in exact arithmetic"""
    _require_nonnegative("binomial_transform", n=n)
    return sum((Fraction((-1) ** k * comb(n, k)) * f(k) for k in range(n + 1)), Fraction(0))


# =============================================================================
# STIRLING NUMBERS
# =============================================================================

def _rstirling1_rows(r: int, n: int) -> list:
    def step(rows, i):
        prev = rows[i - 1]
        shift = i - 1 + r
        row = [0] * (i + 1)
        for k in range(i + 1):
            left = prev[k - 1] if k >= 1 else 0
            right = prev[k] if k < i else 0
            row[k] = left - shift * right
        return tuple(row)

    return cache.extend(("s1", r), n, step, [(1,)])


def _rstirling2_rows(r: int, k: int) -> list:
    def step(rows, i):
        prev = rows[i - 1]
        row = [0] * (i + 1)
        for n in range(i + 1):
            left = prev[n - 1] if n >= 1 else 0
            right = prev[n] if n < i else 0
            row[n] = left + (n + r) * right
        return tuple(row)

    return cache.extend(("S2", r), k, step, [(1,)])


def stirling1(n: int, k: int) -> int:
    """Signed Stirling number of the first kind s(n,k)"""
    return rstirling1(0, n, k)


def stirling1_row(n: int) -> Tuple[int, ...]:
    _require_nonnegative("stirling1", n=n)
    _check_index("stirling1", n, triangle=True)
    return _rstirling1_rows(0, n)[n]


def rstirling1(r: int, n: int, k: int) -> int:
    """r-Stirling number of the first kind: coefficient of x^k in (x−r)(x−r−1)⋯(x−r−n+1)"""
    _require_nonnegative("rstirling1", r=r)
    if n < 0 or k < 0 or k > n:
        return 0
    _check_index("rstirling1", n, triangle=True)
    return _rstirling1_rows(r, n)[n][k]


def rstirling2(r: int, k: int, n: int) -> int:
    """r-Stirling number of the second kind S_r(k,n)"""
    _require_nonnegative("rstirling2", r=r)
    if k < 0 or n < 0 or n > k:
        return 0
    _check_index("rstirling2", k, triangle=True)
    return _rstirling2_rows(r, k)[k][n]


def stirling2(k: int, n: int) -> int:
    """Classical Stirling number of the second kind S(k,n)"""
    return rstirling2(0, k, n)


def rstirling2_by_inclusion_exclusion(r: int, k: int, n: int) -> Fraction:
    """(1/n!)Σ_j (−1)^{n−j} C(n,j)(j+r)^k, used as an independent oracle"""
    if n < 0 or k < 0:
        return Fraction(0)
    total = sum((-1) ** (n - j) * comb(n, j) * (j + r) ** k for j in range(n + 1))
    return Fraction(total, factorial(n))


def rstirling_transform(r: int, b: Sequence[Rational]) -> List[Rational]:
    """a_n = Σ_k S_r(n,k) b_k"""
    return [sum(rstirling2(r, n, k) * b[k] for k in range(n + 1)) for n in range(len(b))]


def rstirling_inverse_transform(r: int, a: Sequence[Rational]) -> List[Rational]:
    """b_n = Σ_k s_r(n,k) a_k"""
    return [sum(rstirling1(r, n, k) * a[k] for k in range(n + 1)) for n in range(len(a))]


# =============================================================================
# CAUCHY NUMBERS
# =============================================================================

def cauchy(n: int) -> Fraction:
    """Cauchy number of the first kind, c_n = Σ_k s(n,k)/(k+1)"""
    _require_nonnegative("cauchy", n=n)
    _check_index("cauchy", n, triangle=True)

    def step(table, i):
        return sum((Fraction(s, k + 1) for k, s in enumerate(stirling1_row(i))), Fraction(0))

    return cache.extend(("cauchy",), n, step, [])[n]


def cauchy_by_integration(n: int) -> Fraction:
    """c_n as the exact integral of z(z−1)⋯(z−n+1) over [0,1]"""
    _require_nonnegative("cauchy", n=n)
    _check_index("cauchy", n, triangle=True)
    return integrate_poly(falling_poly(n))


def gregory(n: int) -> Fraction:
    """c_n/n!, the Bernoulli number of the second kind"""
    return cauchy(n) / factorial(n)


def cauchy2_at_negative(n: int, r: int) -> Fraction:
    """Cauchy polynomial of the second kind at −r: Σ_k s_r(n,k)(−1)^k/(k+1)"""
    _require_nonnegative("cauchy2_at_negative", n=n, r=r)
    return sum((Fraction((-1) ** k * rstirling1(r, n, k), k + 1) for k in range(n + 1)), Fraction(0))


# =============================================================================
# HARMONIC-TYPE NUMBERS
# =============================================================================

def harmonic(n: int, m: int = 1) -> Fraction:
    """Generalized harmonic number H_n^{(m)}; H_0^{(m)} = 0"""
    _require_nonnegative("harmonic", n=n)
    if m < 1:
        raise DomainError(f"harmonic: order m must be ≥ 1 (got {m})")
    _check_index("harmonic", n)
    table = cache.extend(("H", m), n, lambda t, i: t[i - 1] + Fraction(1, i ** m), [Fraction(0)])
    return table[n]


def skew_harmonic(n: int) -> Fraction:
    """Skew-harmonic number H_n^- = 1 − 1/2 + ⋯ + (−1)^{n−1}/n"""
    _require_nonnegative("skew_harmonic", n=n)
    _check_index("skew_harmonic", n)
    table = cache.extend(("Hskew",), n, lambda t, i: t[i - 1] + Fraction((-1) ** (i - 1), i), [Fraction(0)])
    return table[n]


def hyperharmonic(n: int, r: int) -> Fraction:
    """h_n^{(r)} = C(n+r−1, r−1)(H_{n+r−1} − H_{r−1})"""
    _require_nonnegative("hyperharmonic", n=n)
    if r < 1:
        raise DomainError(f"hyperharmonic: r must be ≥ 1 (got {r})")
    _check_index("hyperharmonic", n + r)
    return binomial(n + r - 1, r - 1) * (harmonic(n + r - 1) - harmonic(r - 1))


def hyperharmonic_recursive(n: int, r: int) -> Fraction:
    """h_n^{(r)} by iterated partial sums of H_k"""
    _require_nonnegative("hyperharmonic", n=n)
    if r < 1:
        raise DomainError(f"hyperharmonic: r must be ≥ 1 (got {r})")
    level = [harmonic(k) for k in range(n + 1)]
    for _ in range(r - 1):
        running = Fraction(0)
        summed = [Fraction(0)]
        for k in range(1, n + 1):
            running += level[k]
            summed.append(running)
        level = summed
    return level[n]


def stirling2_negative(n: int, r: int) -> Fraction:
    """S(−n,r) = ((−1)^r/r!) Σ_{j=1}^r C(r,j)(−1)^j/j^n"""
    _require_nonnegative("stirling2_negative", n=n)
    if r < 1:
        raise DomainError(f"stirling2_negative: r must be ≥ 1 (got {r})")
    _check_index("stirling2_negative", r)
    total = sum((Fraction((-1) ** j * comb(r, j), j ** n) for j in range(1, r + 1)), Fraction(0))
    return (-1) ** r * total / factorial(r)


def bell_complete(m: int, t: Sequence[Rational]) -> Rational:
    """Complete exponential Bell polynomial Y_m(t_1,…,t_m)"""
    if m < 0:
        raise DomainError(f"bell_complete: m must be ≥ 0 (got {m})")
    if len(t) != m:
        raise DomainError(f"bell_complete: expected {m} arguments, got {len(t)}")
    y: List[Rational] = [1]
    for j in range(m):
        y.append(sum(comb(j, k) * y[j - k] * t[k] for k in range(j + 1)))
    return y[m]


def bell_at_harmonic(m: int, p: int) -> Rational:
    """Y_m(−0!H_p, −1!H_p^{(2)}, …, −(m−1)!H_p^{(m)})"""
    return bell_complete(m, [-factorial(k - 1) * harmonic(p, k) for k in range(1, m + 1)])


# =============================================================================
# TABLES
# =============================================================================

TABLE_FAMILIES = (
    "cauchy", "stirling1", "rstirling1", "rstirling2", "harmonic",
    "skew-harmonic", "hyperharmonic", "stirling2neg", "bell-at-harmonic",
)


def family_table(family: str, n: int, r: int = 1, m: int = 1) -> List[Tuple[Tuple[int, ...], Rational]]:
    """Rows of (index tuple, value) for the CLI table command"""
    if family not in TABLE_FAMILIES:
        raise DomainError(f"unknown family '{family}' (choose from {', '.join(TABLE_FAMILIES)})")
    _require_nonnegative(family, n=n)
    logger.debug("table %s n=%d r=%d m=%d", family, n, r, m)

    if family == "cauchy":
        return [((i,), cauchy(i)) for i in range(n + 1)]
    if family == "stirling1":
        return [((i, k), stirling1(i, k)) for i in range(n + 1) for k in range(i + 1)]
    if family == "rstirling1":
        return [((i, k), rstirling1(r, i, k)) for i in range(n + 1) for k in range(i + 1)]
    if family == "rstirling2":
        return [((i, k), rstirling2(r, i, k)) for i in range(n + 1) for k in range(i + 1)]
    if family == "harmonic":
        return [((i,), harmonic(i, m)) for i in range(1, n + 1)]
    if family == "skew-harmonic":
        return [((i,), skew_harmonic(i)) for i in range(1, n + 1)]
    if family == "hyperharmonic":
        return [((i,), hyperharmonic(i, r)) for i in range(1, n + 1)]
    if family == "stirling2neg":
        return [((i,), stirling2_negative(i, r)) for i in range(n + 1)]
    return [((i,), bell_at_harmonic(i, n)) for i in range(m + 1)]
