#!/usr/bin/env python3
"""
Command Line Interface Module
Subcommands for listing, verifying and evaluating the identity catalog

Exit codes: 0 all PASS/FLAGGED, 1 any FAIL/NOT_CONVERGED/ERROR, 2 usage or config error
"""

import argparse
import sys
from typing import Any, Dict, List, Optional

import analytic_functions as af
import exact_kernel as ek
import identity_suite as suite
import series_identities as si
import transform_engine as te
from config import ACCELERATION_METHODS, OUTPUT_FORMATS, config, get_logger, set_log_level
from errors import ConfigError, DomainError, IdentityToolkitError, KernelBoundsError, UnknownIdentityError
from identity_records import KINDS, EvalContext
from report_formatter import metadata, render_mapping, render_records, render_reports, render_table

try:
    import colorama
except ImportError:
    colorama = None

logger = get_logger("CLI")

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """argparse rejected the command line"""

    def __init__(self, status: int, message: str = ""):
        self.status = status
        super().__init__(message)


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports instead of exiting, so main(argv) can return a code"""

    def exit(self, status=0, message=None):
        if message:
            self._print_message(message, sys.stderr)
        raise UsageError(status, message or "")


def _global_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    s = argparse.SUPPRESS
    common.add_argument("--format", choices=OUTPUT_FORMATS, default=s, help="output format (default: plain)")
    common.add_argument("--tol", type=float, default=s, help="tolerance for series checks")
    common.add_argument("--max-terms", type=int, default=s, dest="max_terms",
                        help="cap on raw summation terms")
    common.add_argument("--accel", choices=ACCELERATION_METHODS, default=s, help="acceleration method")
    common.add_argument("--jobs", type=int, default=s, help="parallel verification workers")
    common.add_argument("--config", default=s, dest="config_file", help="settings file (JSON or key = value)")
    common.add_argument("--record", action="store_true", default=s, help="store reports in the history database")
    common.add_argument("--no-timing", action="store_true", default=s, dest="no_timing",
                        help="omit timings and timestamps for byte-identical output")
    common.add_argument("--no-color", action="store_true", default=s, dest="no_color", help="plain output without colors")
    common.add_argument("--verbose", "-v", action="store_true", default=s, help="show notes and printed forms")
    common.add_argument("--log-level", default=s, dest="log_level", help="DEBUG, INFO, WARNING or ERROR")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = _Parser(prog="identity-toolkit", parents=[common],
                     description="Verify Cauchy/Stirling number identities and hyperharmonic Euler sums.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("list", parents=[common], help="list catalogued identities")
    p.add_argument("--kind", choices=KINDS + ("series", "exact"), help="only identities of this kind")

    p = sub.add_parser("verify", parents=[common], help="verify one identity")
    p.add_argument("id")
    p.add_argument("--params", help="single grid point, e.g. n=25 or z=1/4,q=2")

    p = sub.add_parser("run-all", parents=[common], help="verify the whole catalog")
    p.add_argument("--filter", default=None, help="kind, 'series', 'exact', id glob, or a comma list")

    p = sub.add_parser("table", parents=[common], help="print exact values of a number family")
    p.add_argument("family", choices=ek.TABLE_FAMILIES)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--m", type=int, default=1)

    p = sub.add_parser("eval", parents=[common], help="evaluate a series or integral")
    p.add_argument("what", choices=("series", "integral"))
    p.add_argument("target")
    p.add_argument("--params", help="parameters for record targets or psi-over-rising (r=…)")

    p = sub.add_parser("history", parents=[common], help="show or flush verification history")
    p.add_argument("--days", type=int, default=7)
    p.add_argument("--recent", type=int, default=0, help="list the N most recent reports")
    p.add_argument("--flush", action="store_true", help="delete all history")

    p = sub.add_parser("config", parents=[common], help="show or change settings")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--save", action="store_true", help="persist changes to the settings file")
    p.add_argument("--reset", action="store_true", help="restore defaults")
    return parser


def _apply_settings(args: argparse.Namespace) -> None:
    if getattr(args, "config_file", None):
        config.load_file(args.config_file)
    if getattr(args, "log_level", None):
        set_log_level(args.log_level)
    config.apply_overrides({
        "accel": getattr(args, "accel", None),
        "jobs": getattr(args, "jobs", None),
        "max_raw_terms": getattr(args, "max_terms", None),
        "output_format": getattr(args, "format", None),
    })
    if getattr(args, "no_timing", False):
        config.set("report_timing", False)
    if getattr(args, "no_color", False):
        config.set("color", False)


def _emit(text: str) -> None:
    sys.stdout.write(text)
    sys.stdout.flush()


def _record_history(reports: List[suite.VerificationReport], command: str, args: argparse.Namespace) -> None:
    if not (getattr(args, "record", False) or config.get("history_enabled", False)):
        return
    from database import get_database
    run_id = get_database().record_reports(
        reports, command=command, identity_filter=getattr(args, "filter", "") or "",
        accel=config.get("accel"), aggregate_status=suite.aggregate_status(reports),
    )
    if run_id:
        print(f"💾 Recorded {len(reports)} report(s) as run {run_id}", file=sys.stderr)


# =============================================================================
# COMMANDS
# =============================================================================

def cmd_list(args: argparse.Namespace) -> int:
    records = suite.select(args.kind or "")
    _emit(render_records(records, config.get("output_format")))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    record = suite.get_record(args.id)
    params = suite.parse_params(args.params)
    report = suite.verify(record.id, params, getattr(args, "tol", None), config.get("accel"))
    reports = [report]
    _emit(render_reports(reports, config.get("output_format"), metadata("verify", id=record.id),
                         verbose=getattr(args, "verbose", False)))
    _record_history(reports, "verify", args)
    return suite.exit_code(reports)


def cmd_run_all(args: argparse.Namespace) -> int:
    expression = args.filter if args.filter is not None else config.get("identity_filter", "")
    fmt = config.get("output_format")
    progress = fmt == "plain" and sys.stderr.isatty()
    reports = suite.run_all(expression, None, config.get("jobs"), config.get("accel"),
                            progress=progress, tol=getattr(args, "tol", None))
    _emit(render_reports(reports, fmt, metadata("run-all", filter=expression),
                         verbose=getattr(args, "verbose", False)))
    _record_history(reports, "run-all", args)
    return suite.exit_code(reports)


def cmd_table(args: argparse.Namespace) -> int:
    rows = ek.family_table(args.family, args.n, args.r, args.m)
    _emit(render_table(args.family, rows, config.get("output_format")))
    return EXIT_OK


def _eval_series(target: str, params: Dict[str, Any], tol: float) -> Dict[str, Any]:
    if target in si.NAMED_SERIES:
        generator = si.named_series(target)
        result = te.sum_series(generator, config.get("accel"), tol)
        reference = si.NAMED_SERIES[target][1]()
        return {
            "target": target, "value": result.value, "error_estimate": result.error_estimate,
            "terms_used": result.terms_used, "method": result.method, "converged": result.converged,
            "reference": reference, "deviation": abs(result.value - reference), "message": result.message,
        }

    record = suite.get_record(target)
    if record.is_exact:
        raise DomainError(f"{target} is exact-finite; use 'verify' instead")
    point = suite.resolve_points(record, params)[0] if params else record.grid[0]
    values = record.evaluate(point, EvalContext(tol=tol, accel=config.get("accel")))
    return {
        "target": target, "params": ",".join(f"{k}={v}" for k, v in point.items()),
        "value": float(values.lhs), "error_estimate": values.error_estimate, "terms_used": values.terms_used,
        "method": values.method, "converged": values.converged, "reference": float(values.rhs),
        "deviation": abs(float(values.lhs) - float(values.rhs)), "message": "; ".join(values.notes),
    }


def _eval_integral(target: str, params: Dict[str, Any], tol: float) -> Dict[str, Any]:
    integrand = si.named_integrand(target, params)
    result = af.quadrature(integrand, tol=tol)
    return {
        "target": target, "value": result.value, "error_estimate": result.error_estimate,
        "evaluations": result.evaluations, "converged": result.converged, "message": result.message,
    }


def cmd_eval(args: argparse.Namespace) -> int:
    params = suite.parse_params(args.params)
    tol = getattr(args, "tol", None) or (1e-12 if args.what == "integral" else 1e-10)
    if args.what == "series":
        values = _eval_series(args.target, params, tol)
    else:
        values = _eval_integral(args.target, params, tol)
    _emit(render_mapping(f"🧮 {args.what} {args.target}", values, config.get("output_format")))
    return EXIT_OK if values["converged"] else EXIT_FAILED


def cmd_history(args: argparse.Namespace) -> int:
    from database import get_database
    db = get_database()
    if args.flush:
        ok = db.flush_history()
        print("🗑️ History flushed" if ok else "❌ Could not flush history")
        return EXIT_OK if ok else EXIT_FAILED

    if args.recent:
        rows = db.get_recent(args.recent)
        print(f"\n🕘 RECENT REPORTS ({len(rows)})")
        print("=" * 50)
        for identity_id, status, abs_err, tol, terms, elapsed, created in rows:
            err = f"{abs_err:.2e}" if abs_err is not None else "-"
            print(f"  {created}  {identity_id:<16} {status:<13} abs_err={err}")
        return EXIT_OK

    stats = db.get_statistics(args.days)
    print(f"\n📊 VERIFICATION STATISTICS (Last {args.days} days)")
    print("=" * 50)
    print(f"📈 Runs: {stats['runs']}, reports: {stats['total']}")
    for status, count in sorted(stats["by_status"].items()):
        print(f"   {status:<13} {count}")
    print(f"⏱️ Average time: {stats['avg_time_ms']:.1f} ms (max {stats['max_time_ms']:.1f} ms)")
    if stats["slowest"]:
        print(f"🐢 Slowest: {stats['slowest'][0]} ({stats['slowest'][1]:.1f} ms)")
    return EXIT_OK


def cmd_config(args: argparse.Namespace) -> int:
    if args.reset:
        config.reset_to_defaults()
    updates = {}
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"expected KEY=VALUE, got '{item}'")
        key, value = (part.strip() for part in item.split("=", 1))
        updates[key] = value
    if not config.update(updates, persist=args.save):
        return EXIT_FAILED
    config.show_current_config()
    return EXIT_OK


COMMANDS = {
    "list": cmd_list,
    "verify": cmd_verify,
    "run-all": cmd_run_all,
    "table": cmd_table,
    "eval": cmd_eval,
    "history": cmd_history,
    "config": cmd_config,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Parse argv, run one command and return its exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        return EXIT_OK if e.status == 0 else EXIT_USAGE

    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    if colorama is not None:
        colorama.just_fix_windows_console()

    # flags only last for this invocation
    saved, saved_file = dict(config.settings), config.config_file
    try:
        _apply_settings(args)
        return COMMANDS[args.command](args)
    except UnknownIdentityError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, DomainError, KernelBoundsError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE
    except IdentityToolkitError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_FAILED
    except Exception as e:
        print(f"❌ Unexpected {type(e).__name__}: {e}", file=sys.stderr)
        logger.debug("traceback", exc_info=True)
        return EXIT_FAILED
    finally:
        if args.command != "config" or not getattr(args, "save", False):
            config.settings, config.config_file = saved, saved_file
        set_log_level(config.get("log_level", "WARNING"))


if __name__ == "__main__":
    sys.exit(main())
