#!/usr/bin/env python3
"""
Database Management Module
SQLite history of verification runs
"""

import json
import os
import sqlite3
import uuid
from contextlib import closing
from typing import Any, Dict, List, Optional

from config import config, get_logger

logger = get_logger("Database")


def _float(value) -> Optional[float]:
    try:
        return float(value)
    except (TypeError, ValueError, OverflowError):
        return None


class Database:
    """Verification history stored in sqlite"""

    def __init__(self, db_path: Optional[str] = None):
        self.db_path = db_path or config.get_history_config()["database_path"]
        self._init_history_database()

    def _init_history_database(self):
        """Create the history tables if needed"""
        try:
            with closing(sqlite3.connect(self.db_path)) as conn:
                cursor = conn.cursor()

                cursor.execute("""
                CREATE TABLE IF NOT EXISTS verification_runs (
                    run_id TEXT PRIMARY KEY,
                    command TEXT NOT NULL,
                    identity_filter TEXT,
                    accel TEXT,
                    total INTEGER DEFAULT 0,
                    aggregate_status TEXT,
                    created_at DATETIME DEFAULT CURRENT_TIMESTAMP
                )
                """)

                cursor.execute("""
                CREATE TABLE IF NOT EXISTS verification_history (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    run_id TEXT,
                    identity_id TEXT NOT NULL,
                    kind TEXT NOT NULL,
                    status TEXT NOT NULL,
                    params TEXT,
                    abs_err REAL,
                    tol REAL,
                    terms_used INTEGER,
                    elapsed_ms REAL,
                    created_at DATETIME DEFAULT CURRENT_TIMESTAMP
                )
                """)

                cursor.execute("""
                CREATE INDEX IF NOT EXISTS idx_history_identity
                ON verification_history (identity_id, created_at)
                """)

                conn.commit()

        except Exception as e:
            print(f"❌ History database init error: {e}")

    def execute_query(self, query: str, params: tuple = (), fetch: str = None) -> Any:
        """Execute database query with proper connection handling"""
        try:
            with closing(sqlite3.connect(self.db_path)) as conn:
                cursor = conn.cursor()
                cursor.execute(query, params)

                result = True
                if fetch == "one":
                    result = cursor.fetchone()
                elif fetch == "all":
                    result = cursor.fetchall()

                conn.commit()
            return result

        except Exception as e:
            print(f"❌ Database query error: {e}")
            return None

    def start_run(self, command: str, identity_filter: str = "", accel: str = "") -> Optional[str]:
        """Open a run row and return its id"""
        run_id = uuid.uuid4().hex[:12]
        ok = self.execute_query(
            "INSERT INTO verification_runs (run_id, command, identity_filter, accel) VALUES (?, ?, ?, ?)",
            (run_id, command, identity_filter, accel),
        )
        return run_id if ok else None

    def finish_run(self, run_id: str, total: int, aggregate_status: str) -> bool:
        return self.execute_query(
            "UPDATE verification_runs SET total = ?, aggregate_status = ? WHERE run_id = ?",
            (total, aggregate_status, run_id),
        ) is not None

    def record_report(self, report, run_id: Optional[str] = None) -> bool:
        """Record one VerificationReport"""
        params = json.dumps({k: str(v) for k, v in report.params.items()}, sort_keys=True)
        return self.execute_query("""
            INSERT INTO verification_history
            (run_id, identity_id, kind, status, params, abs_err, tol, terms_used, elapsed_ms)
            VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)
        """, (run_id, report.id, report.kind, report.status, params, _float(report.abs_err),
              _float(report.tol), report.terms_used, _float(report.elapsed_ms))) is not None

    def record_reports(self, reports: List, command: str = "run-all", identity_filter: str = "",
                       accel: str = "", aggregate_status: str = "") -> Optional[str]:
        run_id = self.start_run(command, identity_filter, accel)
        if run_id is None:
            return None
        recorded = sum(1 for report in reports if self.record_report(report, run_id))
        self.finish_run(run_id, recorded, aggregate_status)
        logger.info("recorded %d reports under run %s", recorded, run_id)
        return run_id

    def get_recent(self, limit: int = 20) -> List[tuple]:
        """Most recent history rows, newest first"""
        rows = self.execute_query("""
            SELECT identity_id, status, abs_err, tol, terms_used, elapsed_ms, created_at
            FROM verification_history
            ORDER BY id DESC LIMIT ?
        """, (int(limit),), fetch="all")
        return rows or []

    def get_statistics(self, days: int = 7) -> Dict[str, Any]:
        """Counts per status and timing aggregates over the last `days` days"""
        stats = {
            'total': 0,
            'runs': 0,
            'by_status': {},
            'avg_time_ms': 0.0,
            'max_time_ms': 0.0,
            'slowest': None,
        }

        window = f"-{int(days)} days"
        rows = self.execute_query("""
            SELECT status, COUNT(*) FROM verification_history
            WHERE created_at > datetime('now', ?)
            GROUP BY status
        """, (window,), fetch="all")
        if rows:
            stats['by_status'] = {status: count for status, count in rows}
            stats['total'] = sum(stats['by_status'].values())

        result = self.execute_query("""
            SELECT AVG(elapsed_ms), MAX(elapsed_ms) FROM verification_history
            WHERE created_at > datetime('now', ?)
        """, (window,), fetch="one")
        if result:
            stats['avg_time_ms'] = result[0] or 0.0
            stats['max_time_ms'] = result[1] or 0.0

        slowest = self.execute_query("""
            SELECT identity_id, elapsed_ms FROM verification_history
            WHERE created_at > datetime('now', ?) AND elapsed_ms IS NOT NULL
            ORDER BY elapsed_ms DESC LIMIT 1
        """, (window,), fetch="one")
        if slowest:
            stats['slowest'] = slowest

        runs = self.execute_query(
            "SELECT COUNT(*) FROM verification_runs WHERE created_at > datetime('now', ?)",
            (window,), fetch="one",
        )
        stats['runs'] = runs[0] if runs else 0
        return stats

    def flush_history(self) -> bool:
        """Delete all recorded runs and reports"""
        ok = self.execute_query("DELETE FROM verification_history") is not None
        return self.execute_query("DELETE FROM verification_runs") is not None and ok

    def health_check(self) -> Dict[str, Any]:
        """Check database health"""
        health = {
            "database_file": os.path.exists(self.db_path),
            "writable": True,
            "total_reports": 0,
            "total_runs": 0,
        }

        result = self.execute_query("SELECT COUNT(*) FROM verification_history", fetch="one")
        if result is None:
            health["writable"] = False
            health["error"] = "history table unreadable"
            return health
        health["total_reports"] = result[0]
        runs = self.execute_query("SELECT COUNT(*) FROM verification_runs", fetch="one")
        health["total_runs"] = runs[0] if runs else 0
        return health


_database: Optional[Database] = None


def get_database(db_path: Optional[str] = None) -> Database:
    """Shared history database, opened on first use"""
    global _database
    if db_path is not None:
        return Database(db_path)
    if _database is None:
        _database = Database()
    return _database
