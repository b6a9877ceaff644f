#!/usr/bin/env python3
"""
Identity Suite Module
Registry of every catalogued identity, exact and numerical verifiers, and the
parallel run over the whole catalog
"""

import fnmatch
import math
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Optional, Tuple

from config import config, get_logger
from errors import DomainError, IdentityToolkitError, UnknownIdentityError
from exact_identities import exact_records
from identity_records import KINDS, EvalContext, IdentityRecord, Params, PointValues, Value
from series_identities import series_records

try:
    from tqdm import tqdm
except ImportError:
    tqdm = None

logger = get_logger("IdentitySuite")

STATUSES = ("PASS", "FLAGGED", "NOT_CONVERGED", "FAIL", "ERROR")
SEVERITY = {status: rank for rank, status in enumerate(STATUSES)}


@dataclass
class PointCheck:
    """Verification outcome at one grid point"""
    params: Params
    lhs: Value
    rhs: Value
    abs_err: Value
    rel_err: Value
    status: str
    terms_used: int = 0
    error_estimate: float = 0.0
    method: str = "exact"
    checks: Dict[str, Value] = field(default_factory=dict)
    printed: Optional[Value] = None
    notes: List[str] = field(default_factory=list)


@dataclass
class VerificationReport:
    """
    Outcome of verifying one identity over its grid (or one explicit point).
    Top-level lhs/rhs/abs_err/params describe the worst point; `points` keeps them all.
    """
    id: str
    kind: str
    params: Params
    lhs: Value
    rhs: Value
    abs_err: Value
    rel_err: Value
    tol: float
    status: str
    terms_used: int
    elapsed_ms: Optional[float]
    paper_ref: str
    note: str = ""
    claimed: Optional[str] = None
    message: str = ""
    points: List[PointCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status in ("PASS", "FLAGGED")


# =============================================================================
# REGISTRY
# =============================================================================

@lru_cache(maxsize=1)
def _catalog() -> Tuple[IdentityRecord, ...]:
    records = exact_records() + series_records()
    seen = set()
    for record in records:
        if record.id in seen:
            raise IdentityToolkitError(f"duplicate identity id: {record.id}")
        if record.kind not in KINDS:
            raise IdentityToolkitError(f"{record.id}: unknown kind '{record.kind}'")
        seen.add(record.id)
    return tuple(records)


def registry() -> List[IdentityRecord]:
    """All catalogued identities in registration order"""
    return list(_catalog())


def get_record(identity_id: str) -> IdentityRecord:
    for record in _catalog():
        if record.id == identity_id:
            return record
    raise UnknownIdentityError(identity_id)


def matches_filter(record: IdentityRecord, expression: str) -> bool:
    """
    Comma-separated terms, any of which may match: a kind name, "series"
    (every non-exact kind), "exact", or an fnmatch glob over ids.
    """
    terms = [term.strip() for term in (expression or "").split(",") if term.strip()]
    if not terms:
        return True
    for term in terms:
        if term in KINDS and record.kind == term:
            return True
        if term == "series" and not record.is_exact:
            return True
        if term == "exact" and record.is_exact:
            return True
        if fnmatch.fnmatchcase(record.id, term):
            return True
    return False


def select(expression: str = "") -> List[IdentityRecord]:
    return [record for record in _catalog() if matches_filter(record, expression)]


# =============================================================================
# PARAMETERS AND TOLERANCES
# =============================================================================

def parse_param_value(text: str) -> Any:
    """'12' → 12, '1/4' or '0.25' → Fraction(1, 4), anything else stays a string"""
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        return text
    return value.numerator if value.denominator == 1 else value


def parse_params(text: Optional[str]) -> Params:
    """'n=25,q=3' → {'n': 25, 'q': 3}"""
    params: Params = {}
    if not text:
        return params
    for item in text.split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise DomainError(f"malformed parameter '{item}' (expected name=value)")
        name, value = item.split("=", 1)
        params[name.strip()] = parse_param_value(value)
    return params


def _template(record: IdentityRecord, params: Params) -> Params:
    """First grid point that agrees with every label-valued parameter given"""
    labels = {name: value for name, value in params.items() if isinstance(value, str)}
    for point in record.grid:
        if all(point.get(name) == value for name, value in labels.items()):
            return point
    return record.grid[0]


def resolve_points(record: IdentityRecord, params: Optional[Params]) -> List[Params]:
    """The whole grid, or one point built from the given parameters and checked against the record's ranges"""
    if not params:
        return list(record.grid)
    unknown = [name for name in params if name not in record.parameter_names]
    if unknown:
        allowed = ", ".join(record.parameter_names) or "none"
        raise DomainError(f"{record.id}: unknown parameter(s) {', '.join(unknown)} (allowed: {allowed})")
    point = {**_template(record, params), **params}
    problems = record.violations(point)
    if problems:
        raise DomainError(f"{record.id}: out of range: {'; '.join(problems)}")
    return [point]


def resolve_tol(record: IdentityRecord, tol: Optional[float] = None,
                overrides: Optional[Dict[str, float]] = None) -> float:
    """Explicit tol, then the per-id override, then the record default"""
    if record.is_exact:
        return 0.0
    if tol is not None:
        return float(tol)
    merged = dict(config.get("tolerance_overrides", {}) or {})
    merged.update(overrides or {})
    if record.id in merged:
        return float(merged[record.id])
    return record.default_tol


# =============================================================================
# VERIFIERS
# =============================================================================

def _as_rational(record_id: str, value: Value) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
        raise IdentityToolkitError(f"{record_id}: non-rational value {value!r} on the exact path")
    return Fraction(value)


def _relative(abs_err, rhs):
    return abs_err / abs(rhs) if rhs != 0 else abs_err


def _exact_point(record: IdentityRecord, params: Params) -> PointCheck:
    values: PointValues = record.evaluate(params, None)
    lhs = _as_rational(record.id, values.lhs)
    rhs = _as_rational(record.id, values.rhs)
    abs_err = abs(lhs - rhs)
    checks = {name: _as_rational(record.id, v) for name, v in values.checks.items()}
    for value in checks.values():
        abs_err = max(abs_err, abs(value - rhs))
    status = "PASS" if abs_err == 0 else "FAIL"
    printed = None if values.printed is None else Fraction(values.printed)
    return PointCheck(params, lhs, rhs, abs_err, _relative(abs_err, rhs), status,
                      checks=checks, printed=printed, notes=list(values.notes))


def _series_point(record: IdentityRecord, params: Params, ctx: EvalContext) -> PointCheck:
    values: PointValues = record.evaluate(params, ctx)
    lhs, rhs = float(values.lhs), float(values.rhs)
    abs_err = abs(lhs - rhs)
    checks = {name: float(v) for name, v in values.checks.items()}
    for value in checks.values():
        abs_err = max(abs_err, abs(value - rhs))
    if not math.isfinite(abs_err):
        abs_err = math.inf

    if abs_err <= ctx.tol:
        status = "PASS"
    elif not values.converged:
        status = "NOT_CONVERGED"
    else:
        status = "FAIL"
    if record.is_claimed and status != "PASS":
        status = "FLAGGED"

    printed = None if values.printed is None else float(values.printed)
    return PointCheck(params, lhs, rhs, abs_err, _relative(abs_err, rhs), status,
                      terms_used=values.terms_used, error_estimate=values.error_estimate,
                      method=values.method, checks=checks, printed=printed, notes=list(values.notes))


def _assemble(record: IdentityRecord, points: List[PointCheck], tol: float, started: float) -> VerificationReport:
    elapsed = (time.perf_counter() - started) * 1000.0 if config.get("report_timing", True) else None
    if not points:
        return VerificationReport(record.id, record.kind, {}, 0, 0, 0, 0, tol, "PASS", 0, elapsed,
                                  record.paper_ref, record.note, record.claimed)
    worst = max(points, key=lambda p: (SEVERITY[p.status], p.abs_err))
    return VerificationReport(
        id=record.id, kind=record.kind, params=dict(worst.params), lhs=worst.lhs, rhs=worst.rhs,
        abs_err=worst.abs_err, rel_err=worst.rel_err, tol=tol, status=worst.status,
        terms_used=sum(p.terms_used for p in points), elapsed_ms=elapsed,
        paper_ref=record.paper_ref, note=record.note, claimed=record.claimed, points=points,
    )


def verify_exact(identity_id: str, params: Optional[Params] = None) -> VerificationReport:
    """Both sides in exact rationals at every grid point; PASS only on bit-exact equality"""
    record = get_record(identity_id)
    if not record.is_exact:
        raise DomainError(f"{identity_id} is {record.kind}; use verify_series")
    started = time.perf_counter()
    points = [_exact_point(record, p) for p in resolve_points(record, params)]
    report = _assemble(record, points, 0.0, started)
    logger.info("%s: %s over %d points", record.id, report.status, len(points))
    return report


def verify_series(identity_id: str, params: Optional[Params] = None, tol: Optional[float] = None,
                  accel: Optional[str] = None, overrides: Optional[Dict[str, float]] = None) -> VerificationReport:
    """Series side through the transform engine, closed side by formula or quadrature"""
    record = get_record(identity_id)
    if record.is_exact:
        raise DomainError(f"{identity_id} is exact-finite; use verify_exact")
    tol = resolve_tol(record, tol, overrides)
    if not tol > 0:
        raise DomainError(f"tol must be > 0 (got {tol})")
    ctx = EvalContext(tol=tol, accel=accel or config.get("accel", "auto"))
    started = time.perf_counter()
    points = [_series_point(record, p, ctx) for p in resolve_points(record, params)]
    report = _assemble(record, points, tol, started)
    logger.info("%s: %s (worst abs_err %.2e, tol %.0e)", record.id, report.status, report.abs_err, tol)
    return report


def verify(identity_id: str, params: Optional[Params] = None, tol: Optional[float] = None,
           accel: Optional[str] = None, overrides: Optional[Dict[str, float]] = None) -> VerificationReport:
    record = get_record(identity_id)
    if record.is_exact:
        return verify_exact(identity_id, params)
    return verify_series(identity_id, params, tol, accel, overrides)


def _error_report(record: IdentityRecord, error: Exception) -> VerificationReport:
    return VerificationReport(
        id=record.id, kind=record.kind, params={}, lhs=0, rhs=0, abs_err=math.inf, rel_err=math.inf,
        tol=record.default_tol, status="ERROR", terms_used=0, elapsed_ms=None,
        paper_ref=record.paper_ref, note=record.note, claimed=record.claimed, message=str(error),
    )


def run_all(filter: str = "", tol_overrides: Optional[Dict[str, float]] = None, jobs: Optional[int] = None,
            accel: Optional[str] = None, progress: bool = False, tol: Optional[float] = None) -> List[VerificationReport]:
    """Verify every matching record concurrently; reports come back sorted by id.

    `tol` applies to every non-exact record and beats per-id overrides.
    """
    records = select(filter)
    if not records:
        return []
    jobs = max(1, int(jobs or config.get("jobs", 4)))
    reports: List[VerificationReport] = []

    def verify_record(record):
        return verify(record.id, None, tol, accel, tol_overrides)

    bar = tqdm(total=len(records), desc="Verifying", unit="id", disable=not progress) if tqdm else None
    with ThreadPoolExecutor(max_workers=jobs) as executor:
        future_to_record = {executor.submit(verify_record, record): record for record in records}
        for future in as_completed(future_to_record):
            record = future_to_record[future]
            try:
                reports.append(future.result())
            except IdentityToolkitError as e:
                logger.warning("%s: %s", record.id, e)
                reports.append(_error_report(record, e))
            except Exception as e:
                logger.error("%s: unexpected %s: %s", record.id, type(e).__name__, e)
                logger.debug("%s traceback", record.id, exc_info=True)
                reports.append(_error_report(record, e))
            if bar is not None:
                bar.update(1)
    if bar is not None:
        bar.close()

    reports.sort(key=lambda r: r.id)
    return reports


# =============================================================================
# AGGREGATION
# =============================================================================

def status_counts(reports: List[VerificationReport]) -> Dict[str, int]:
    counts = {status: 0 for status in STATUSES}
    for report in reports:
        counts[report.status] += 1
    return counts


def aggregate_status(reports: List[VerificationReport]) -> str:
    """Worst status over the reports; paper-claimed records can only contribute FLAGGED"""
    worst = "PASS"
    for report in reports:
        status = report.status
        if report.kind == "paper-claimed" and status in ("FAIL", "NOT_CONVERGED"):
            status = "FLAGGED"
        if SEVERITY[status] > SEVERITY[worst]:
            worst = status
    return worst


def exit_code(reports: List[VerificationReport]) -> int:
    return 0 if aggregate_status(reports) in ("PASS", "FLAGGED") else 1
