#!/usr/bin/env python3
"""
Test configuration loading and the verification history database
"""

import json
import sqlite3
import sys

import pytest

# Add current directory to path for imports
sys.path.append('.')

from config import Config
import database
from database import Database
from errors import ConfigError
from identity_suite import verify_exact, verify_series


def test_config_defaults_and_setters(tmp_path):
    print("🧪 TESTING CONFIG DEFAULTS")
    cfg = Config(str(tmp_path / "missing.json"))
    assert cfg.get("accel") == "auto"
    assert cfg.get("default_tol") == 1e-8
    assert cfg.get("exact_head") == 48

    cfg.set("jobs", "8")
    assert cfg.get("jobs") == 8
    cfg.set("report_timing", "no")
    assert cfg.get("report_timing") is False
    with pytest.raises(ConfigError):
        cfg.set("bogus", 1)
    with pytest.raises(ConfigError):
        cfg.set("accel", "magic")
    with pytest.raises(ConfigError):
        cfg.set("jobs", "many")

    cfg.apply_overrides({"accel": None, "max_raw_terms": 1000})
    assert cfg.get("accel") == "auto"
    assert cfg.get("max_raw_terms") == 1000

    cfg.reset_to_defaults()
    assert cfg.get("jobs") == 4
    print("✅ Defaults, coercion and validation work")


def test_config_files(tmp_path):
    print("🧪 TESTING CONFIG FILES")
    kv = tmp_path / "settings.conf"
    kv.write_text("# engine\naccel = levin\ntol.SER-B6 = 1e-7\ncolor = off\n")
    cfg = Config(str(kv))
    assert cfg.get("accel") == "levin"
    assert cfg.get("tolerance_overrides") == {"SER-B6": 1e-7}
    assert cfg.get("color") is False

    js = tmp_path / "settings.json"
    js.write_text(json.dumps({"jobs": 2, "output_format": "csv"}))
    cfg = Config(str(js))
    assert cfg.get("jobs") == 2 and cfg.get("output_format") == "csv"

    cfg.set("exact_head", 64)
    assert cfg.save_config()
    assert Config(str(js)).get("exact_head") == 64

    broken = tmp_path / "broken.conf"
    broken.write_text("accel levin\n")
    with pytest.raises(ConfigError):
        Config(str(broken))
    with pytest.raises(ConfigError):
        cfg.load_file(str(tmp_path / "absent.conf"))
    print("✅ key = value and JSON files load")


def test_history_database(tmp_path):
    print("🧪 TESTING HISTORY DATABASE")
    db = Database(str(tmp_path / "history.db"))
    health = db.health_check()
    assert health["database_file"] and health["writable"]
    assert health["total_reports"] == 0

    reports = [verify_exact("EX-B10", {"n": 3}), verify_series("SER-L19", {"r": 2})]
    run_id = db.record_reports(reports, command="verify", identity_filter="", accel="auto",
                               aggregate_status="PASS")
    assert run_id

    recent = db.get_recent(5)
    assert [row[0] for row in recent] == ["SER-L19", "EX-B10"]
    assert recent[1][1] == "PASS" and recent[1][2] == 0.0

    stats = db.get_statistics(1)
    assert stats["total"] == 2 and stats["runs"] == 1
    assert stats["by_status"] == {"PASS": 2}

    assert db.health_check()["total_runs"] == 1
    assert db.flush_history()
    assert db.get_recent(5) == []
    assert db.get_statistics(1)["total"] == 0
    print("✅ History recorded, summarized and flushed")


def test_failed_query_closes_connection(tmp_path, monkeypatch):
    print("🧪 TESTING CONNECTION CLEANUP ON QUERY ERRORS")
    db = Database(str(tmp_path / "history.db"))
    opened = []
    connect = database.sqlite3.connect

    def tracking_connect(*args, **kwargs):
        conn = connect(*args, **kwargs)
        opened.append(conn)
        return conn

    monkeypatch.setattr(database.sqlite3, "connect", tracking_connect)
    assert db.execute_query("SELECT * FROM no_such_table", fetch="all") is None
    assert db.execute_query("SELECT COUNT(*) FROM verification_runs", fetch="one") == (0,)
    assert len(opened) == 2
    for conn in opened:
        with pytest.raises(sqlite3.ProgrammingError):
            conn.execute("SELECT 1")
    print("✅ Connections closed after failing and succeeding queries")


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
