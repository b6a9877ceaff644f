#!/usr/bin/env python3
"""
Main Entry Point for the Identity Toolkit
Exact and numerical verification of Cauchy/Stirling number identities

    python main.py check     - dependency report
    python main.py status    - dependency and history summary
    python main.py <command> - anything cli.py accepts (list, verify, run-all, ...)
"""

import signal
import sys
from typing import List, Tuple

# (module, install hint, what is lost without it)
REQUIRED = [
    ("numpy", "pip install numpy", ""),
    ("scipy", "pip install scipy", ""),
    ("sqlite3", "Built-in Python module", ""),
]
OPTIONAL = [
    ("mpmath", "pip install mpmath", "extended-precision cross checks"),
    ("tqdm", "pip install tqdm", "progress bars in run-all"),
    ("colorama", "pip install colorama", "colored status columns"),
]


def signal_handler(signum, frame):
    """Handle Ctrl+C gracefully"""
    print("\n\n👋 Interrupted by user - goodbye!")
    sys.exit(0)


def _import_status(modules) -> List[Tuple[str, str, str, bool]]:
    found = []
    for module, hint, feature in modules:
        try:
            __import__(module)
            found.append((module, hint, feature, True))
        except ImportError:
            found.append((module, hint, feature, False))
    return found


def check_dependencies(verbose: bool = True) -> bool:
    """Check for required dependencies"""
    required, optional = _import_status(REQUIRED), _import_status(OPTIONAL)
    missing = [(m, hint) for m, hint, _, ok in required if not ok]

    if verbose:
        print("🔍 DEPENDENCY CHECK")
        print("=" * 40)
        for module, hint, feature, ok in required + optional:
            if ok:
                print(f"✅ {module}")
            elif feature:
                print(f"⚠️  {module} (optional, {feature}) - {hint}")
            else:
                print(f"❌ {module} - {hint}")

    if missing:
        print("\n❌ Missing required dependencies:")
        for module, hint in missing:
            print(f"   {module}: {hint}")
        return False

    if verbose:
        print("✅ Dependency check complete!")
    return True


def show_banner():
    """Show application banner"""
    banner = """
╔══════════════════════════════════════════════════════════════════════╗
║                     🧮 IDENTITY TOOLKIT 🧮                            ║
║                                                                      ║
║  • Exact Cauchy, Stirling, r-Stirling and hyperharmonic numbers      ║
║  • Finite identities checked in rational arithmetic                  ║
║  • Accelerated Euler sums checked against closed forms               ║
╚══════════════════════════════════════════════════════════════════════╝
    """
    print(banner)


def show_status() -> bool:
    """Dependencies, registry size and history database health"""
    if not check_dependencies():
        return False
    try:
        from config import config
        from database import get_database
        import identity_suite as suite

        records = suite.registry()
        exact = sum(1 for r in records if r.is_exact)
        print("\n📚 Registry:")
        print(f"  Identities: {len(records)} ({exact} exact, {len(records) - exact} series)")

        history = config.get_history_config()
        health = get_database().health_check()
        print("💾 History database:")
        print(f"  Path: {history['database_path']}")
        print(f"  Recording by default: {'✅' if history['enabled'] else '❌'}")
        print(f"  Writable: {'✅' if health.get('writable') else '❌'}")
        print(f"  Runs stored: {health.get('total_runs', 0)}, reports: {health.get('total_reports', 0)}")
        return True
    except Exception as e:
        print(f"❌ Status check error: {e}")
        return False


def main(argv=None) -> int:
    """Main application entry point"""
    signal.signal(signal.SIGINT, signal_handler)
    argv = sys.argv[1:] if argv is None else argv

    if argv and argv[0] == "check":
        return 0 if check_dependencies() else 1
    if argv and argv[0] == "status":
        show_banner()
        return 0 if show_status() else 1

    if not check_dependencies(verbose=False):
        print("💡 Install missing dependencies and try again")
        return 1

    try:
        from cli import main as cli_main
    except ImportError as e:
        print(f"❌ Module import error: {e}")
        return 1

    try:
        return cli_main(argv)
    except KeyboardInterrupt:
        print("\n\n👋 Interrupted by user - goodbye!")
        return 0


if __name__ == "__main__":
    sys.exit(main())
