#!/usr/bin/env python3
"""
Report Formatter Module
Renders verification reports, catalog listings and number tables as plain text,
JSON, CSV or Markdown
"""

import csv
import io
import json
import math
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence

from config import OUTPUT_FORMATS, config
from errors import DomainError
from identity_suite import (STATUSES, PointCheck, VerificationReport, aggregate_status, parse_param_value,
                            status_counts)

try:
    from colorama import Fore, Style
    COLORAMA_AVAILABLE = True
except ImportError:
    Fore = Style = None
    COLORAMA_AVAILABLE = False

TOOL_NAME = "identity-toolkit"
TOOL_VERSION = "1.0.0"

REPORT_FIELDS = ("id", "kind", "params", "lhs", "rhs", "abs_err", "rel_err", "tol", "status",
                 "terms_used", "elapsed_ms", "paper_ref")

STATUS_ICONS = {"PASS": "✅", "FLAGGED": "⚠️", "NOT_CONVERGED": "⏳", "FAIL": "❌", "ERROR": "💥"}


def _status_colors() -> Dict[str, str]:
    if not COLORAMA_AVAILABLE:
        return {}
    return {
        "PASS": Fore.GREEN, "FAIL": Fore.RED, "FLAGGED": Fore.YELLOW,
        "NOT_CONVERGED": Fore.MAGENTA, "ERROR": Fore.RED + Style.BRIGHT,
    }


# =============================================================================
# VALUE ENCODING
# =============================================================================

def format_value(value: Any) -> str:
    """Rationals as "p/q", floats with 17 significant digits"""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int, Fraction)):
        return str(Fraction(value))
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.17g}"
    return str(value)


def short_value(value: Any) -> str:
    """Compact rendering for plain and markdown output"""
    if isinstance(value, float) and math.isfinite(value):
        return f"{value:.12g}"
    if isinstance(value, Fraction) and value.denominator != 1 and len(str(value)) > 40:
        return f"{str(value)[:37]}…"
    return format_value(value)


def _json_value(value: Any) -> Any:
    """Rationals become strings; finite floats stay JSON numbers (repr is lossless)"""
    if value is None or isinstance(value, bool):
        return value
    if isinstance(value, (int, Fraction)):
        return str(Fraction(value))
    if isinstance(value, float):
        return value if math.isfinite(value) else format_value(value)
    return value


def _decode_value(value: Any) -> Any:
    if isinstance(value, str):
        if value in ("inf", "-inf", "nan"):
            return float(value)
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            return value
    return value


def format_params(params: Dict[str, Any]) -> str:
    return ",".join(f"{k}={format_value(v)}" for k, v in params.items())


def _params_dict(params: Dict[str, Any]) -> Dict[str, Any]:
    return {k: (v if isinstance(v, (int, str)) and not isinstance(v, bool) else format_value(v))
            for k, v in params.items()}


def _decode_params(params: Dict[str, Any]) -> Dict[str, Any]:
    return {k: parse_param_value(v) if isinstance(v, str) else v for k, v in params.items()}


# =============================================================================
# REPORTS ↔ DICTS
# =============================================================================

def point_to_dict(point: PointCheck) -> Dict[str, Any]:
    return {
        "params": _params_dict(point.params),
        "lhs": _json_value(point.lhs),
        "rhs": _json_value(point.rhs),
        "abs_err": _json_value(point.abs_err),
        "rel_err": _json_value(point.rel_err),
        "status": point.status,
        "terms_used": point.terms_used,
        "error_estimate": _json_value(point.error_estimate),
        "method": point.method,
        "checks": {name: _json_value(v) for name, v in point.checks.items()},
        "printed": _json_value(point.printed),
        "notes": list(point.notes),
    }


def report_to_dict(report: VerificationReport, include_points: bool = True) -> Dict[str, Any]:
    data = {
        "id": report.id,
        "kind": report.kind,
        "params": _params_dict(report.params),
        "lhs": _json_value(report.lhs),
        "rhs": _json_value(report.rhs),
        "abs_err": _json_value(report.abs_err),
        "rel_err": _json_value(report.rel_err),
        "tol": report.tol,
        "status": report.status,
        "terms_used": report.terms_used,
        "elapsed_ms": report.elapsed_ms,
        "paper_ref": report.paper_ref,
        "note": report.note,
        "claimed": report.claimed,
        "message": report.message,
    }
    if include_points:
        data["points"] = [point_to_dict(p) for p in report.points]
    return data


def point_from_dict(data: Dict[str, Any]) -> PointCheck:
    return PointCheck(
        params=_decode_params(data.get("params", {})),
        lhs=_decode_value(data["lhs"]), rhs=_decode_value(data["rhs"]),
        abs_err=_decode_value(data["abs_err"]), rel_err=_decode_value(data["rel_err"]),
        status=data["status"], terms_used=data.get("terms_used", 0),
        error_estimate=_decode_value(data.get("error_estimate", 0.0)), method=data.get("method", "exact"),
        checks={k: _decode_value(v) for k, v in data.get("checks", {}).items()},
        printed=_decode_value(data.get("printed")), notes=list(data.get("notes", [])),
    )


def report_from_dict(data: Dict[str, Any]) -> VerificationReport:
    """Inverse of report_to_dict"""
    missing = [name for name in REPORT_FIELDS if name not in data]
    if missing:
        raise DomainError(f"report is missing field(s): {', '.join(missing)}")
    if data["status"] not in STATUSES:
        raise DomainError(f"unknown status '{data['status']}'")
    return VerificationReport(
        id=data["id"], kind=data["kind"], params=_decode_params(data["params"]),
        lhs=_decode_value(data["lhs"]), rhs=_decode_value(data["rhs"]),
        abs_err=_decode_value(data["abs_err"]), rel_err=_decode_value(data["rel_err"]),
        tol=data["tol"], status=data["status"], terms_used=data["terms_used"],
        elapsed_ms=data["elapsed_ms"], paper_ref=data["paper_ref"], note=data.get("note", ""),
        claimed=data.get("claimed"), message=data.get("message", ""),
        points=[point_from_dict(p) for p in data.get("points", [])],
    )


def metadata(command: str, **settings) -> Dict[str, Any]:
    """Run metadata kept apart from the deterministic report array"""
    meta = {
        "tool": TOOL_NAME,
        "version": TOOL_VERSION,
        "command": command,
        "settings": {
            "accel": config.get("accel"),
            "jobs": config.get("jobs"),
            "exact_term_limit": config.get("exact_term_limit"),
            **settings,
        },
    }
    if config.get("report_timing", True):
        from datetime import datetime, timezone
        meta["generated_at"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return meta


# =============================================================================
# REPORT RENDERING
# =============================================================================

def _render_json(reports: Sequence[VerificationReport], meta: Optional[Dict[str, Any]]) -> str:
    document = {
        "metadata": meta or metadata("verify"),
        "summary": {"aggregate": aggregate_status(list(reports)), "counts": status_counts(list(reports))},
        "reports": [report_to_dict(r) for r in reports],
    }
    return json.dumps(document, indent=2, ensure_ascii=False)


def _render_csv(reports: Sequence[VerificationReport]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(REPORT_FIELDS)
    for report in reports:
        points = report.points or [PointCheck(report.params, report.lhs, report.rhs, report.abs_err,
                                              report.rel_err, report.status, report.terms_used)]
        for point in points:
            writer.writerow([
                report.id, report.kind, format_params(point.params), format_value(point.lhs),
                format_value(point.rhs), format_value(point.abs_err), format_value(point.rel_err),
                format_value(report.tol), point.status, point.terms_used,
                format_value(report.elapsed_ms), report.paper_ref,
            ])
    return buffer.getvalue()


def _render_markdown(reports: Sequence[VerificationReport]) -> str:
    lines = [
        "| id | kind | status | abs_err | tol | terms | worst params |",
        "|---|---|---|---|---|---|---|",
    ]
    for r in reports:
        lines.append(f"| {r.id} | {r.kind} | {r.status} | {short_value(r.abs_err)} | {r.tol:g} | "
                     f"{r.terms_used} | {format_params(r.params)} |")
    counts = status_counts(list(reports))
    lines.append("")
    lines.append("**Summary:** " + ", ".join(f"{s} {counts[s]}" for s in STATUSES if counts[s]))
    return "\n".join(lines) + "\n"


def _flagged_lines(report: VerificationReport) -> List[str]:
    lines = []
    for point in report.points:
        if point.status != "FLAGGED":
            continue
        lines.append(f"      {format_params(point.params) or '-'}: computed {short_value(point.lhs)} "
                     f"vs claimed {short_value(point.rhs)}")
    return lines


def _render_plain(reports: Sequence[VerificationReport], color: bool, verbose: bool) -> str:
    colors = _status_colors() if color else {}
    reset = Style.RESET_ALL if colors else ""
    lines = []
    for r in reports:
        status = f"{colors.get(r.status, '')}{r.status:<13}{reset}"
        timing = f", {r.elapsed_ms:.1f} ms" if r.elapsed_ms is not None else ""
        count = len(r.points) or 1
        lines.append(f"{STATUS_ICONS[r.status]} {status} {r.id:<16} abs_err={short_value(r.abs_err)} "
                     f"tol={r.tol:g} ({count} point{'s' if count != 1 else ''}, {r.terms_used} terms{timing})")
        if r.message:
            lines.append(f"      {r.message}")
        if r.status == "FLAGGED":
            lines.extend(_flagged_lines(r))
        elif r.status != "PASS" or verbose:
            lines.append(f"      worst at {format_params(r.params) or '-'}: lhs {short_value(r.lhs)} "
                         f"rhs {short_value(r.rhs)}")
        if verbose and r.note:
            lines.append(f"      📝 {r.note}")
        if verbose:
            printed = [p for p in r.points if p.printed is not None and p.printed != p.rhs]
            for point in printed[:3]:
                lines.append(f"      📄 as printed at {format_params(point.params)}: {short_value(point.printed)}")
    counts = status_counts(list(reports))
    summary = ", ".join(f"{counts[s]} {s}" for s in STATUSES if counts[s]) or "nothing verified"
    lines.append(f"\n📊 {len(reports)} identities: {summary}")
    return "\n".join(lines) + "\n"


def render_reports(reports: Sequence[VerificationReport], fmt: Optional[str] = None,
                   meta: Optional[Dict[str, Any]] = None, color: Optional[bool] = None,
                   verbose: bool = False) -> str:
    fmt = fmt or config.get("output_format", "plain")
    if fmt not in OUTPUT_FORMATS:
        raise DomainError(f"unknown output format '{fmt}' (choose from {', '.join(OUTPUT_FORMATS)})")
    if fmt == "json":
        return _render_json(reports, meta) + "\n"
    if fmt == "csv":
        return _render_csv(reports)
    if fmt == "markdown":
        return _render_markdown(reports)
    color = config.get("color", True) if color is None else color
    return _render_plain(reports, color, verbose)


# =============================================================================
# LISTINGS, TABLES AND SINGLE VALUES
# =============================================================================

def render_records(records: Iterable, fmt: str = "plain") -> str:
    rows = [{"id": r.id, "kind": r.kind, "points": len(r.grid), "default_tol": r.default_tol,
             "paper_ref": r.paper_ref} for r in records]
    if fmt == "json":
        return json.dumps(rows, indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=["id", "kind", "points", "default_tol", "paper_ref"],
                                lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buffer.getvalue()
    if fmt == "markdown":
        lines = ["| id | kind | points | citation |", "|---|---|---|---|"]
        lines += [f"| {r['id']} | {r['kind']} | {r['points']} | {r['paper_ref']} |" for r in rows]
        return "\n".join(lines) + "\n"
    lines = [f"📚 {len(rows)} identities"]
    lines += [f"  {r['id']:<16} {r['kind']:<21} {r['paper_ref']}" for r in rows]
    return "\n".join(lines) + "\n"


def render_table(family: str, rows: Sequence, fmt: str = "plain") -> str:
    """Rows of ((index, …), exact value)"""
    if fmt == "json":
        data = [{"index": list(index), "value": format_value(value)} for index, value in rows]
        return json.dumps({"family": family, "values": data}, indent=2) + "\n"
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["family", "index", "value"])
        for index, value in rows:
            writer.writerow([family, " ".join(str(i) for i in index), format_value(value)])
        return buffer.getvalue()
    if fmt == "markdown":
        lines = ["| index | value |", "|---|---|"]
        lines += [f"| {', '.join(str(i) for i in index)} | {format_value(value)} |" for index, value in rows]
        return "\n".join(lines) + "\n"
    lines = [f"🔢 {family}"]
    lines += [f"  {', '.join(str(i) for i in index):>8}  {format_value(value)}" for index, value in rows]
    return "\n".join(lines) + "\n"


def render_mapping(title: str, values: Dict[str, Any], fmt: str = "plain") -> str:
    """Flat name → value mapping (eval results, history statistics)"""
    if fmt == "json":
        return json.dumps({k: _json_value(v) for k, v in values.items()}, indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(list(values))
        writer.writerow([format_value(v) for v in values.values()])
        return buffer.getvalue()
    if fmt == "markdown":
        lines = ["| field | value |", "|---|---|"]
        lines += [f"| {k} | {format_value(v)} |" for k, v in values.items()]
        return "\n".join(lines) + "\n"
    lines = [f"{title}", "=" * 50]
    lines += [f"  {k:<16} {format_value(v)}" for k, v in values.items()]
    return "\n".join(lines) + "\n"
