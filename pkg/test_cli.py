#!/usr/bin/env python3
"""
Test the command line interface and the report formats
"""

import csv
import io
import json
import math
import sys

import pytest

# Add current directory to path for imports
sys.path.append('.')

import identity_suite as suite
from cli import main
from errors import DomainError
from report_formatter import report_from_dict, report_to_dict


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_list(capsys):
    print("🧪 TESTING list")
    code, out = _run(capsys, "list", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert len(rows) >= 38
    assert {"EX-B10", "SER-FINAL", "SER-EX9INT"} <= {row["id"] for row in rows}

    code, out = _run(capsys, "list", "--kind", "paper-claimed", "--format", "json")
    assert {row["id"] for row in json.loads(out)} == {"SER-EX10-COR", "SER-L11-PRINTED"}
    print("✅ list works")


def test_verify_exact_json(capsys):
    print("🧪 TESTING verify")
    code, out = _run(capsys, "verify", "EX-B10", "--params", "n=25", "--format", "json", "--no-timing")
    assert code == 0
    document = json.loads(out)
    report = document["reports"][0]
    assert report["status"] == "PASS"
    assert report["abs_err"] == "0"
    assert report["elapsed_ms"] is None
    assert "generated_at" not in document["metadata"]
    assert document["summary"]["aggregate"] == "PASS"

    # byte-identical reruns
    code, again = _run(capsys, "verify", "EX-B10", "--params", "n=25", "--format", "json", "--no-timing")
    assert again == out
    print("✅ verify reports PASS deterministically")


def test_usage_errors(capsys):
    print("🧪 TESTING USAGE ERRORS")
    assert main(["verify", "NOPE"]) == 2
    assert main(["verify", "EX-B10", "--accel", "bogus"]) == 2
    assert main(["verify", "EX-B10", "--params", "bogus=1"]) == 2
    assert main(["eval", "integral", "nope"]) == 2
    assert main([]) == 2
    capsys.readouterr()
    print("✅ Usage errors exit with 2")


def test_bad_config_file(capsys, tmp_path):
    print("🧪 TESTING CONFIG FILE ERRORS")
    bad = tmp_path / "settings.conf"
    bad.write_text("bogus_key = 1\n")
    assert main(["list", "--config", str(bad)]) == 2

    good = tmp_path / "good.conf"
    good.write_text("# tolerances\ntol.SER-L19 = 1e-6\noutput_format = json\n")
    code, out = _run(capsys, "list", "--config", str(good))
    assert code == 0
    assert json.loads(out)[0]["id"]
    print("✅ Config files validated")


def test_tables(capsys):
    print("🧪 TESTING table")
    code, out = _run(capsys, "table", "cauchy", "--n", "4", "--format", "json")
    assert code == 0
    assert [v["value"] for v in json.loads(out)["values"]] == ["1", "1/2", "-1/6", "1/4", "-19/30"]

    code, out = _run(capsys, "table", "hyperharmonic", "--n", "3", "--r", "2", "--format", "json")
    assert [v["value"] for v in json.loads(out)["values"]] == ["1", "5/2", "13/3"]

    code, out = _run(capsys, "table", "harmonic", "--n", "3", "--m", "2", "--format", "json")
    assert [v["value"] for v in json.loads(out)["values"]] == ["1", "5/4", "49/36"]
    print("✅ Tables printed exactly")


def test_eval(capsys):
    print("🧪 TESTING eval")
    code, out = _run(capsys, "eval", "integral", "psi-over-x-plus-1", "--format", "json")
    assert code == 0
    assert abs(json.loads(out)["value"] - 0.3606201929) < 1e-9

    code, out = _run(capsys, "eval", "series", "SER-B13", "--tol", "1e-8", "--format", "json")
    values = json.loads(out)
    assert abs(values["value"] - math.log(4.0)) < 1e-6
    assert values["reference"] == pytest.approx(math.log(4.0))
    print("✅ eval matches the reference constants")


def test_out_of_range_parameters(capsys):
    print("🧪 TESTING PARAMETER RANGES")
    assert main(["verify", "SER-L19", "--params", "r=1"]) == 2
    assert main(["verify", "EX-EX11", "--params", "r=1"]) == 2
    assert main(["verify", "SER-L2", "--params", "r=0"]) == 2
    assert main(["verify", "SER-B9", "--params", "z=1"]) == 2
    assert main(["eval", "series", "SER-L20", "--params", "case=general,r=1,m=1"]) == 2
    assert main(["eval", "integral", "psi-over-rising", "--params", "r=0"]) == 2
    err = capsys.readouterr().err
    assert "out of range" in err and "Traceback" not in err
    assert "r=1 (expected" in err
    print("✅ Out-of-range parameters exit with 2 and a message")


def test_eval_named_series(capsys):
    print("🧪 TESTING eval FOR NAMED SERIES")
    ln2 = math.log(2.0)
    zeta3 = 1.2020569031595942
    expected = {
        "SER-B14": math.pi ** 2 / 6 + 2 * ln2 ** 2,
        "SER-B15": 4 * zeta3 + 8 / 3 * ln2 ** 3 + 2 * math.pi ** 2 / 3 * ln2,
    }
    for target, reference in expected.items():
        code, out = _run(capsys, "eval", "series", target, "--tol", "1e-8", "--format", "json")
        values = json.loads(out)
        assert code == 0, target
        assert values["reference"] == pytest.approx(reference, rel=1e-14), target
        assert abs(values["value"] - reference) < 1e-6, (target, values["value"])
    print("✅ Named series match their constants")


def test_config_set(capsys):
    print("🧪 TESTING config --set")
    from config import config
    before = dict(config.settings)
    code, out = _run(capsys, "config", "--set", "accel=levin", "--set", "jobs=3")
    assert code == 0
    assert "Acceleration: levin" in out
    assert config.settings == before
    assert main(["config", "--set", "jobs=many"]) == 2
    assert main(["config", "--set", "jobs"]) == 2
    capsys.readouterr()
    print("✅ config applies validated updates for the invocation")


def test_run_all_csv(capsys):
    print("🧪 TESTING run-all CSV")
    code, out = _run(capsys, "run-all", "--filter", "EX-B1*", "--format", "csv", "--no-timing")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][:3] == ["id", "kind", "params"]
    expected = sum(len(suite.get_record(i).grid) for i in ("EX-B10", "EX-B16", "EX-B18"))
    assert len(rows) - 1 == expected
    assert {row[8] for row in rows[1:]} == {"PASS"}
    print(f"✅ {expected} grid points written")


def test_report_round_trip():
    print("🧪 TESTING REPORT SERIALIZATION")
    exact = suite.verify("EX-B10", {"n": 5})
    back = report_from_dict(json.loads(json.dumps(report_to_dict(exact))))
    assert back.lhs == exact.lhs and back.rhs == exact.rhs
    assert back.status == exact.status and back.params == exact.params
    assert len(back.points) == len(exact.points)

    series = suite.verify("SER-L19", {"r": 2})
    back = report_from_dict(json.loads(json.dumps(report_to_dict(series))))
    assert back.lhs == series.lhs
    assert back.abs_err == series.abs_err

    broken = report_to_dict(exact)
    del broken["tol"]
    with pytest.raises(DomainError):
        report_from_dict(broken)
    print("✅ Reports survive a JSON round trip")


def test_entry_point(capsys, tmp_path, monkeypatch):
    print("🧪 TESTING main.py")
    import main as entry
    from config import config
    monkeypatch.setitem(config.settings, "database_path", str(tmp_path / "history.db"))
    monkeypatch.setattr("database._database", None)

    assert entry.check_dependencies(verbose=False)
    assert entry.main(["check"]) == 0
    assert entry.main(["status"]) == 0
    out = capsys.readouterr().out
    assert "DEPENDENCY CHECK" in out and "Runs stored: 0" in out

    code = entry.main(["table", "harmonic", "--n", "2", "--format", "json"])
    assert code == 0
    assert [v["value"] for v in json.loads(capsys.readouterr().out)["values"]] == ["1", "3/2"]
    print("✅ Entry point dispatches to the CLI")


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
