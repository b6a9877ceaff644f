#!/usr/bin/env python3
"""
Identity Records Module
Record and point types shared by the exact and series identity catalogs
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

KINDS = ("exact-finite", "series-closed-form", "series-vs-quadrature", "paper-claimed")

Value = Union[int, Fraction, float]
Params = Dict[str, Any]


@dataclass
class EvalContext:
    """Per-verification settings handed to series evaluators"""
    tol: float
    accel: str = "auto"


@dataclass
class PointValues:
    """Both sides of an identity at one grid point, plus independent cross-checks"""
    lhs: Value
    rhs: Value
    checks: Dict[str, Value] = field(default_factory=dict)
    printed: Optional[Value] = None
    terms_used: int = 0
    error_estimate: float = 0.0
    converged: bool = True
    notes: List[str] = field(default_factory=list)
    method: str = "exact"


# =============================================================================
# PARAMETER DOMAINS
# =============================================================================

def _is_integer(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_rational(value: Any) -> bool:
    return _is_integer(value) or isinstance(value, Fraction)


@dataclass(frozen=True)
class Domain:
    """Allowed values of one identity parameter"""
    description: str
    accepts: Callable[[Any], bool]


def integers_from(low: int) -> Domain:
    return Domain(f"an integer ≥ {low}", lambda v: _is_integer(v) and v >= low)


def integers_between(low: int, high: int) -> Domain:
    return Domain(f"an integer in {low}..{high}", lambda v: _is_integer(v) and low <= v <= high)


def one_of(values) -> Domain:
    choices = tuple(dict.fromkeys(values))
    return Domain("one of " + ", ".join(str(c) for c in choices), lambda v: v in choices)


def open_interval(low, high) -> Domain:
    return Domain(f"a rational in ({low}, {high})", lambda v: _is_rational(v) and low < v < high)


def closed_interval(low, high) -> Domain:
    return Domain(f"a rational in [{low}, {high}]", lambda v: _is_rational(v) and low <= v <= high)


def rationals_above(low) -> Domain:
    return Domain(f"a rational > {low}", lambda v: _is_rational(v) and v > low)


def inferred_domain(values: List[Any]) -> Domain:
    """Integer axes admit anything from the grid minimum up; label axes admit their grid labels"""
    if values and all(_is_integer(v) for v in values):
        return integers_from(min(values))
    if values and all(isinstance(v, str) for v in values):
        return one_of(values)
    return Domain("a rational", _is_rational)


# (description, predicate over a complete point)
Constraint = Tuple[str, Callable[[Params], bool]]


@dataclass(frozen=True)
class IdentityRecord:
    """One catalogued identity with its parameter grid and evaluator"""
    id: str
    kind: str
    paper_ref: str
    grid: List[Params]
    evaluate: Callable[..., PointValues]
    default_tol: float = 0.0
    note: str = ""
    claimed: Optional[str] = None
    domains: Dict[str, Domain] = field(default_factory=dict)
    constraints: Tuple[Constraint, ...] = ()

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact-finite"

    @property
    def is_claimed(self) -> bool:
        return self.kind == "paper-claimed"

    @property
    def parameter_names(self) -> List[str]:
        names: List[str] = []
        for point in self.grid:
            for key in point:
                if key not in names:
                    names.append(key)
        return names

    def domain(self, name: str) -> Domain:
        if name in self.domains:
            return self.domains[name]
        return inferred_domain([point[name] for point in self.grid if name in point])

    def violations(self, point: Params) -> List[str]:
        """Human-readable reasons the point lies outside this identity's range"""
        problems = []
        for name, value in point.items():
            domain = self.domain(name)
            if not domain.accepts(value):
                problems.append(f"{name}={value} (expected {domain.description})")
        if not problems:
            problems.extend(description for description, holds in self.constraints if not holds(point))
        return problems


def grid(**axes) -> List[Params]:
    """Cartesian product of named axes, first axis slowest"""
    points: List[Params] = [{}]
    for name, values in axes.items():
        points = [dict(point, **{name: value}) for point in points for value in values]
    return points
