#!/usr/bin/env python3
"""
Transform Engine Module
Binomial-transform series with Cauchy and Stirling weights: inner finite-difference sums,
partial-sum acceleration, Euler–Maclaurin / Boole tails and the Theorem 1 closed forms.
"""

import math
import warnings
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable, List, Optional, Sequence

import numpy as np

import analytic_functions as af
import exact_kernel as ek
from config import ACCELERATION_METHODS, config, get_logger
from errors import CancellationWarning, DomainError

logger = get_logger("TransformEngine")

DECAY_CLASSES = ("alternating", "monotone", "geometric", "cauchy", "mixed")
CANCELLATION_THRESHOLD = 1e6

# Tail integrals run over t = N·e^v, v ∈ [0, TAIL_SPAN]
TAIL_SPAN = 60.0
_EPS = np.finfo(float).eps


@dataclass
class TermGenerator:
    """
    term(n) for integer n ≥ start. When `smooth` is given it is the real-variable
    extension F with term(n) = F(n) (monotone/cauchy) or term(n) = (−1)^n F(n)
    (alternating); it must accept floats and numpy arrays for t ≥ start + 2.
    """
    term: Callable[[int], float]
    decay: str = "mixed"
    start: int = 0
    smooth: Optional[Callable] = None
    last: Optional[int] = None
    name: str = ""

    def __post_init__(self):
        if self.decay not in DECAY_CLASSES:
            raise DomainError(f"unknown decay class '{self.decay}' (choose from {', '.join(DECAY_CLASSES)})")

    def values(self, begin: int, end: int) -> np.ndarray:
        """Terms for begin ≤ n < end, exact-backed below the exact limit, vectorized above"""
        limit = config.get("exact_term_limit", 160)
        head_end = min(end, max(begin, limit + 1)) if self.smooth is not None else end
        head = [float(self.term(n)) for n in range(begin, head_end)]
        if head_end >= end:
            return np.asarray(head, dtype=float)
        chunks = [np.asarray(head, dtype=float)]
        for lo in range(head_end, end, 4096):
            t = np.arange(lo, min(end, lo + 4096), dtype=float)
            chunk = np.asarray(self.smooth(t), dtype=float)
            if self.decay == "alternating":
                chunk = np.where(t % 2 == 0, chunk, -chunk)
            chunks.append(chunk)
        return np.concatenate(chunks)


@dataclass
class SeriesResult:
    """Value of an infinite series with its error estimate"""
    value: float
    error_estimate: float
    terms_used: int
    method: str
    converged: bool = True
    heuristic: bool = False
    message: str = ""


@dataclass
class AccelerationResult:
    value: float
    error_estimate: float
    method: str
    flagged: bool = False
    message: str = ""


@dataclass
class InnerSum:
    """Σ_k C(n,k)(−1)^k f(k) with the path that produced it"""
    value: float
    exact: Optional[Fraction] = None
    cancellation: float = 1.0
    flagged: bool = False

    @property
    def is_exact(self) -> bool:
        return self.exact is not None


# =============================================================================
# FLOAT SEQUENCES BACKED BY THE EXACT KERNEL
# =============================================================================

@lru_cache(maxsize=None)
def _exact_gregory(n: int) -> float:
    return float(ek.gregory(n))


@lru_cache(maxsize=None)
def _exact_stirling_ratio(n: int, m: int) -> float:
    return float(Fraction(ek.stirling1(n, m), math.factorial(n)))


def gregory_float(n: int) -> float:
    """c_n/n! as a float; exact rationals up to exact_term_limit, the integral representation beyond"""
    if n <= config.get("exact_term_limit", 160):
        return _exact_gregory(n)
    return (-1) ** (n - 1) * af.gregory_abs(n)


def stirling_ratio(n: int, m: int) -> float:
    """s(n,m)/n! as a float"""
    if n < m:
        return 0.0
    if n <= config.get("exact_term_limit", 160):
        return _exact_stirling_ratio(n, m)
    return (-1) ** (n - m) * af.unsigned_stirling_ratio(n, m)


def harmonic_float(n: int, k: int = 1) -> float:
    if n <= config.get("exact_term_limit", 160):
        return float(ek.harmonic(n, k))
    return af.harmonic_real(n, k)


# =============================================================================
# INNER BINOMIAL SUMS
# =============================================================================

def alternating_binomial_sum(f: Callable[[int], object], n: int) -> InnerSum:
    """Σ_{k=0}^{n} C(n,k)(−1)^k f(k); exact when f is rational-valued at the integers"""
    if n < 0:
        raise DomainError(f"alternating_binomial_sum: n must be ≥ 0 (got {n})")
    values = [f(k) for k in range(n + 1)]

    if all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in values):
        total = ek.binomial_transform(lambda k: values[k], n)
        return InnerSum(float(total), exact=total)

    terms = [ek.binomial(n, k) * (-1) ** k * float(v) for k, v in enumerate(values)]
    total = math.fsum(terms)
    peak = max(abs(t) for t in terms)
    if total != 0:
        ratio = peak / abs(total)
    else:
        ratio = math.inf if peak > 0 else 1.0
    flagged = ratio > CANCELLATION_THRESHOLD
    if flagged:
        warnings.warn(
            f"binomial sum at n={n}: intermediate magnitude {ratio:.1e}× the result",
            CancellationWarning, stacklevel=2,
        )
    return InnerSum(total, cancellation=ratio, flagged=flagged)


def prop_a_generator(f: Callable[[int], object], decay: str = "mixed") -> TermGenerator:
    """Terms (−1)^n c_n/n! · Σ_k C(n,k)(−1)^k f(k) for an arbitrary f"""
    def term(n):
        inner = alternating_binomial_sum(f, n)
        if inner.is_exact:
            return float((-1) ** n * ek.gregory(n) * inner.exact)
        return (-1) ** n * gregory_float(n) * inner.value

    return TermGenerator(term=term, decay=decay, start=0, name="prop-a")


def prop_b_generator(f: Callable[[int], object], m: int, decay: str = "mixed") -> TermGenerator:
    """Terms (−1)^n s(n,m)/n! · Σ_k C(n,k)(−1)^k f(k)"""
    def term(n):
        inner = alternating_binomial_sum(f, n)
        if inner.is_exact:
            return float((-1) ** n * Fraction(ek.stirling1(n, m), math.factorial(n)) * inner.exact)
        return (-1) ** n * stirling_ratio(n, m) * inner.value

    return TermGenerator(term=term, decay=decay, start=m, name="prop-b")


# =============================================================================
# ACCELERATION
# =============================================================================

def _pick_best(estimates: List[float], seed: float) -> AccelerationResult:
    best_value, best_error = estimates[0], abs(estimates[0] - seed)
    for previous, current in zip(estimates, estimates[1:]):
        error = abs(current - previous)
        if error < best_error:
            best_value, best_error = current, error
    return AccelerationResult(best_value, best_error, "")


def _wynn_epsilon(s: Sequence[float]) -> AccelerationResult:
    s = list(s[-64:])
    previous = [0.0] * (len(s) + 1)
    current = list(s)
    estimates: List[float] = []
    for column in range(1, len(s)):
        following = []
        for i in range(len(current) - 1):
            diff = current[i + 1] - current[i]
            if diff == 0.0 or not math.isfinite(diff):
                following = None
                break
            following.append(previous[i + 1] + 1.0 / diff)
        if not following:
            break
        previous, current = current, following
        if column % 2 == 0 and math.isfinite(current[-1]):
            estimates.append(current[-1])

    if not estimates:
        return AccelerationResult(s[-1], abs(s[-1] - s[-2]), "wynn-epsilon", flagged=True,
                                  message="singular epsilon table, last partial sum used")
    result = _pick_best(estimates, s[-1])
    result.method = "wynn-epsilon"
    return result


def _levin_u(s: Sequence[float], beta: float = 1.0, kmax: int = 16) -> AccelerationResult:
    terms = [s[0]] + [s[i] - s[i - 1] for i in range(1, len(s))]
    estimates: List[float] = []
    for k in range(1, min(kmax, len(s) - 1) + 1):
        if any(terms[j] == 0.0 for j in range(k + 1)):
            break
        numerator = denominator = 0.0
        for j in range(k + 1):
            scale = (-1) ** j * math.comb(k, j) * ((beta + j) / (beta + k)) ** (k - 1)
            weight = scale / ((beta + j) * terms[j])
            numerator += weight * s[j]
            denominator += weight
        if denominator == 0.0 or not math.isfinite(numerator / denominator):
            break
        estimates.append(numerator / denominator)

    if len(estimates) < 2:
        return AccelerationResult(s[-1], abs(s[-1] - s[-2]), "levin", flagged=True,
                                  message="singular Levin table, last partial sum used")
    result = _pick_best(estimates, s[-1])
    result.method = "levin"
    return result


def _euler_transform(s: Sequence[float]) -> AccelerationResult:
    split = len(s) // 2
    head = s[split - 1]
    tail = [s[i] - s[i - 1] for i in range(split, len(s))]
    row = [(-1) ** k * t for k, t in enumerate(tail)]

    total = 0.0
    smallest = math.inf
    growing = 0
    for p in range(len(row)):
        contribution = (-1) ** p * row[0] / 2.0 ** (p + 1)
        if abs(contribution) > smallest:
            growing += 1
            if growing >= 3:
                break
        else:
            growing = 0
        smallest = min(smallest, abs(contribution))
        total += contribution
        row = [row[i + 1] - row[i] for i in range(len(row) - 1)]
        if not row:
            break
    value = head + total
    if not math.isfinite(value):
        return AccelerationResult(s[-1], abs(s[-1] - s[-2]), "euler", flagged=True,
                                  message="Euler transform overflowed, last partial sum used")
    return AccelerationResult(value, smallest, "euler")


def _richardson(s: Sequence[float]) -> AccelerationResult:
    counts = []
    count = len(s)
    while count >= 4 and len(counts) < 10:
        counts.append(count)
        count //= 2
    counts.reverse()
    xs = [1.0 / c for c in counts]
    table = [s[c - 1] for c in counts]

    diagonal = [table[-1]]
    for level in range(1, len(xs)):
        table = [
            (xs[i] * table[i + 1] - xs[i + level] * table[i]) / (xs[i] - xs[i + level])
            for i in range(len(table) - 1)
        ]
        diagonal.append(table[-1])
    if len(diagonal) < 2 or not all(math.isfinite(v) for v in diagonal):
        return AccelerationResult(s[-1], abs(s[-1] - s[-2]), "richardson", flagged=True,
                                  message="Richardson table unusable, last partial sum used")
    return AccelerationResult(diagonal[-1], abs(diagonal[-1] - diagonal[-2]), "richardson")


def accelerate(partials: Sequence[float], method: str = "wynn-epsilon") -> AccelerationResult:
    """Extrapolated limit of a sequence of partial sums"""
    if len(partials) < 4:
        raise DomainError(f"accelerate needs at least 4 partial sums (got {len(partials)})")
    s = [float(v) for v in partials]
    if not all(math.isfinite(v) for v in s):
        raise DomainError("accelerate: partial sums must be finite")

    if s[-1] == s[-2] == s[-3]:
        return AccelerationResult(s[-1], 0.0, method)
    if method == "none":
        return AccelerationResult(s[-1], abs(s[-1] - s[-2]), "none")
    if method == "wynn-epsilon":
        result = _wynn_epsilon(s)
    elif method == "levin":
        result = _levin_u(s)
    elif method == "euler":
        result = _euler_transform(s)
    elif method == "richardson":
        result = _richardson(s)
    else:
        raise DomainError(f"unknown acceleration method '{method}'")

    if not math.isfinite(result.value) or not math.isfinite(result.error_estimate):
        return AccelerationResult(s[-1], abs(s[-1] - s[-2]), method, flagged=True,
                                  message="non-finite extrapolation, last partial sum used")
    if method in ("wynn-epsilon", "euler") and _logarithmic(s):
        # same-sign terms with ratio → 1: the remaining tail is of order s_n − s_{n/2}
        result.error_estimate = max(result.error_estimate, abs(s[-1] - s[len(s) // 2]))
        result.flagged = True
        result.message = result.message or f"{method} on logarithmically convergent partial sums"
    return result


def _logarithmic(s: Sequence[float]) -> bool:
    """Last terms share a sign and their ratio climbs toward 1"""
    t = [s[i] - s[i - 1] for i in range(len(s) - 3, len(s))]
    if any(v == 0.0 for v in t):
        return False
    ratios = [t[1] / t[0], t[2] / t[1]]
    return all(r > 0.5 for r in ratios) and ratios[1] - ratios[0] > 1e-9


# =============================================================================
# TAILS
# =============================================================================

def tail_estimate(decay_class: str, n: int, last_term: float, ratio: Optional[float] = None,
                  power: Optional[float] = None) -> float:
    """
    Bound on Σ_{k>n} |t_k| from the last term. Geometric and alternating bounds are
    rigorous under their class; monotone uses the integral comparison for t ~ k^{−p};
    cauchy-class (p ≈ 1 with log factors) is a heuristic.
    """
    if n < 1:
        raise DomainError(f"tail_estimate: n must be ≥ 1 (got {n})")
    magnitude = abs(last_term)
    if decay_class == "alternating":
        return magnitude
    if decay_class == "geometric":
        rho = 0.5 if ratio is None else abs(ratio)
        if rho >= 1:
            return math.inf
        return magnitude * rho / (1 - rho)
    if decay_class in ("monotone", "mixed") and power is not None and power > 1.05:
        return magnitude * n / (power - 1)
    return magnitude * n * math.log(max(n, 3))


def _stencil(F: Callable, x: float) -> tuple:
    values = [float(F(x + d)) for d in (-2.0, -1.0, 0.0, 1.0, 2.0)]
    first = (values[0] - 8 * values[1] + 8 * values[3] - values[4]) / 12.0
    third = (-values[0] + 2 * values[1] - 2 * values[3] + values[4]) / 2.0
    return values[2], first, third


def _smooth_tail(gen: TermGenerator, N: int, tol: float) -> tuple:
    """Σ_{n≥N} term(n) by Boole (alternating) or Euler–Maclaurin (monotone) summation"""
    value, first, third = _stencil(gen.smooth, float(N))
    if gen.decay == "alternating":
        return (-1) ** N * (value / 2 - first / 4 + third / 48), 0.0, True

    def integrand(v):
        t = N * math.exp(v)
        return float(gen.smooth(t)) * t

    outer = af.quadrature(integrand, tol=max(1e-15, 1e-4 * tol), lower=0.0, upper=TAIL_SPAN,
                          points=(1.0, 4.0, 10.0, 25.0))
    total = outer.value + value / 2 - first / 12 + third / 720
    return total, outer.error_estimate, outer.converged


def _smoothed_sum(gen: TermGenerator, tol: float) -> SeriesResult:
    N = max(int(config.get("exact_head", 48)), gen.start + 8)
    terms = gen.values(gen.start, 2 * N)
    head_short = math.fsum(terms[:N - gen.start])
    head_long = math.fsum(terms)

    tail_short, err_short, ok_short = _smooth_tail(gen, N, tol)
    tail_long, err_long, ok_long = _smooth_tail(gen, 2 * N, tol)
    short, long_ = head_short + tail_short, head_long + tail_long
    error = abs(short - long_) + err_short + err_long + 8 * _EPS * max(abs(long_), float(np.abs(terms).max(initial=0.0)))
    method = "boole" if gen.decay == "alternating" else "euler-maclaurin"
    converged = ok_short and ok_long and error <= tol and math.isfinite(long_)
    logger.debug("%s: %s tail at N=%d, value %.15g ± %.1e", gen.name, method, N, long_, error)
    return SeriesResult(long_, error, 2 * N, method, converged,
                        message="" if converged else f"{method} tail did not settle (±{error:.1e})")


def _raw_sum(gen: TermGenerator, tol: float, cap: int) -> SeriesResult:
    """Plain summation; geometric series stop once the remaining tail is negligible"""
    if gen.decay == "geometric":
        total = 0.0
        compensation = 0.0
        previous = None
        ratio = None
        negligible = 0
        n = gen.start
        while n - gen.start < cap:
            t = float(gen.term(n))
            # Kahan summation
            y = t - compensation
            s = total + y
            compensation = (s - total) - y
            total = s
            ratio = abs(t / previous) if previous not in (None, 0.0) else None
            if abs(t) <= 1e-18 * max(1.0, abs(total)):
                negligible += 1
                if negligible >= 4 and (ratio is None or ratio < 1):
                    break
            else:
                negligible = 0
            previous = t
            n += 1
        used = n - gen.start + 1
        bound = tail_estimate("geometric", max(n, 1), previous or 0.0, ratio)
        error = bound + used * _EPS * abs(total)
        converged = error <= tol and used <= cap
        return SeriesResult(total, error, used, "raw", converged,
                            message="" if converged else "term cap reached")

    terms = gen.values(gen.start, gen.start + cap)
    total = math.fsum(terms)
    n = gen.start + cap - 1
    last = float(terms[-1])
    half = float(terms[len(terms) // 2]) if len(terms) > 2 else 0.0
    power = None
    if last != 0 and half != 0:
        power = math.log(abs(half / last)) / math.log((n + 1) / (gen.start + len(terms) // 2 + 1))
    decay = gen.decay if gen.decay != "mixed" else "monotone"
    heuristic = decay == "cauchy" or (decay == "monotone" and (power is None or power <= 1.05))
    error = tail_estimate(decay, max(n, 1), last, power=power)
    converged = error <= tol
    return SeriesResult(total, error, cap, "none", converged, heuristic=heuristic,
                        message="heuristic tail bound" if heuristic else "")


def _window_sum(gen: TermGenerator, method: str, tol: float, cap: int) -> SeriesResult:
    terms = gen.values(gen.start, gen.start + cap)
    partials = np.cumsum(terms)
    full = accelerate(partials, method)
    half = accelerate(partials[: max(4, cap // 2)], method)
    error = max(full.error_estimate, abs(full.value - half.value))
    converged = error <= tol and not full.flagged
    message = full.message or ("" if converged else f"{method} estimate unsettled (±{error:.1e})")
    return SeriesResult(full.value, error, cap, method, converged, message=message)


def sum_series(gen: TermGenerator, accel: Optional[str] = None, tol: Optional[float] = None,
               cap: Optional[int] = None) -> SeriesResult:
    """Σ_{n≥start} term(n) with the requested acceleration"""
    accel = accel or config.get("accel", "auto")
    tol = config.get("default_tol", 1e-8) if tol is None else tol
    if accel not in ACCELERATION_METHODS:
        raise DomainError(f"unknown acceleration method '{accel}'")
    if not tol > 0:
        raise DomainError(f"tol must be > 0 (got {tol})")

    if gen.last is not None:
        values = [float(gen.term(n)) for n in range(gen.start, gen.last + 1)]
        return SeriesResult(math.fsum(values), 0.0, len(values), "finite")

    method = accel
    if accel == "auto":
        if gen.decay == "geometric":
            method = "raw"
        elif gen.smooth is not None and gen.decay in ("alternating", "monotone", "cauchy"):
            method = "smooth"
        else:
            method = "wynn-epsilon" if gen.decay == "alternating" else "levin"

    if method == "raw" or (method == "none" and gen.decay == "geometric"):
        result = _raw_sum(gen, tol, cap or config.get("max_raw_terms", 200000))
    elif method == "smooth":
        result = _smoothed_sum(gen, tol)
    elif method == "none":
        result = _raw_sum(gen, tol, cap or config.get("max_raw_terms", 200000))
    else:
        result = _window_sum(gen, method, tol, cap or config.get("max_accel_terms", 400))

    if not math.isfinite(result.value):
        raise DomainError(f"series {gen.name or '?'} produced a non-finite value")
    logger.debug("%s: %s → %.15g (±%.1e, %d terms)", gen.name, result.method, result.value,
                 result.error_estimate, result.terms_used)
    return result


def prop_a_series(terms: TermGenerator, accel: Optional[str] = None, tol: Optional[float] = None,
                  cap: Optional[int] = None) -> SeriesResult:
    """Σ_{n≥0} of a Proposition A term generator"""
    return sum_series(terms, accel, tol, cap)


def prop_b_series(m: int, reduced: TermGenerator, accel: Optional[str] = None, tol: Optional[float] = None,
                  cap: Optional[int] = None) -> SeriesResult:
    """Proposition B sum; s(n,m) vanishes below n = m so summation starts there"""
    if m < 1:
        raise DomainError(f"prop_b_series: m must be ≥ 1 (got {m})")
    if reduced.start < m:
        reduced = replace(reduced, start=m)
    return sum_series(reduced, accel, tol, cap)


# =============================================================================
# THEOREM 1 AND PROPOSITION 1
# =============================================================================

def _check_z(z: float):
    if not 0 < z < 1:
        raise DomainError(f"z must lie in (0,1) (got {z})")


def theorem1_A(z: float, k: int, extended: Optional[bool] = None) -> float:
    """A_k = ∫₀¹ x^k (1−z)^x dx by the closed logarithm formula"""
    _check_z(z)
    if k < 0:
        raise DomainError(f"theorem1_A: k must be ≥ 0 (got {k})")
    extended = config.get("extended_precision", False) if extended is None else extended
    if extended:
        return af.mp_theorem1_A(z, k)
    L = -math.log1p(-z)
    tail = sum(1.0 / (math.factorial(j) * L ** (k - j + 1)) for j in range(k + 1))
    return math.factorial(k) * (1.0 / L ** (k + 1) - (1 - z) * tail)


def theorem1_integral(z: float, q: int) -> float:
    """∫₀¹ C(x,q)(1−z)^x dx = (1/q!) Σ_k s(q,k) A_k"""
    total = math.fsum(ek.stirling1(q, k) * theorem1_A(z, k) for k in range(q + 1))
    return total / math.factorial(q)


THEOREM1_VARIANTS = ("signed", "shifted")


def theorem1_closed_form(z: float, q: int, variant: str = "signed") -> float:
    """
    Closed form of Σ_n (−1)^n c_n/n! C(n,q) z^n.

    signed:  (−1)^q (z/(1−z))^q ∫₀¹ C(x,q)(1−z)^x dx
    shifted: (−z)^q ∫₀¹ C(x,q)(1−z)^{x−q} dx
    """
    _check_z(z)
    if q < 0:
        raise DomainError(f"theorem1_closed_form: q must be ≥ 0 (got {q})")
    if variant == "signed":
        return (-1) ** q * (z / (1 - z)) ** q * theorem1_integral(z, q)
    if variant == "shifted":
        return (-z) ** q * theorem1_integral(z, q) * (1 - z) ** (-q)
    raise DomainError(f"unknown variant '{variant}' (choose from {', '.join(THEOREM1_VARIANTS)})")


def theorem1_quadrature(z: float, q: int, tol: float = 1e-12) -> af.QuadratureResult:
    """Direct quadrature of (−1)^q (z/(1−z))^q C(x,q)(1−z)^x"""
    _check_z(z)
    scale = (-1) ** q * (z / (1 - z)) ** q
    result = af.quadrature(lambda x: scale * af.binom_real(x, q) * (1 - z) ** x, tol=tol)
    return result


def theorem1_terms(z: float, q: int) -> TermGenerator:
    _check_z(z)
    return TermGenerator(
        term=lambda n: (-1) ** n * gregory_float(n) * math.comb(n, q) * z ** n,
        decay="geometric", start=q, name=f"theorem1(z={z:g},q={q})",
    )


def prop1_rhs(z: float, q: int, m: int) -> float:
    """(1/m!)(−1)^q (z/(1−z))^q (d/dx)^m [(1−z)^x C(x,q)] at x = 0"""
    _check_z(z)
    if q < 0 or m < 0:
        raise DomainError("prop1_rhs: q and m must be ≥ 0")
    ell = math.log1p(-z)
    coefficient = math.fsum(
        ek.stirling1(q, k) / math.factorial(q) * ell ** (m - k) / math.factorial(m - k)
        for k in range(min(m, q) + 1)
    )
    return (-1) ** q * (z / (1 - z)) ** q * coefficient


def prop1_terms(z: float, q: int, m: int) -> TermGenerator:
    _check_z(z)
    return TermGenerator(
        term=lambda n: (-1) ** n * stirling_ratio(n, m) * math.comb(n, q) * z ** n,
        decay="geometric", start=max(m, q), name=f"prop1(z={z:g},q={q},m={m})",
    )
