import json
import subprocess
import sys

import pytest

from ckperiods import cli
from ckperiods.errors import PrecisionExhaustedError, SizeLimitError
from ckperiods.scenario import read_scenario_json


def run(*argv):
    report, code, _ = cli.run(list(argv))
    return report, code


def test_check_bundled_and_bad_scenario(tmp_path):
    for name in ("abelian", "nonabelian", "running", "split"):
        report, code = run("check", name)
        assert code == 0 and report["ok"], name
    raw = read_scenario_json("running")
    raw["phi"] = [["1", "1"], ["0", "1"]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(raw))
    report, code = run("check", str(bad))
    assert code == 2 and not report["ok"] and report["outputs"]["issues"]


def test_missing_file_is_validation_error():
    report, code = run("period", "/nonexistent/scenario.json")
    assert code == 2 and report["error"]["error"] == "VALIDATION_FAILED"


@pytest.mark.parametrize("exc, expected", [(PrecisionExhaustedError, 4), (SizeLimitError, 5)])
def test_error_exit_codes(monkeypatch, exc, expected):
    def boom(args):
        raise exc("forced")
    monkeypatch.setitem(cli.COMMANDS, "period", boom)
    report, code = run("period", "running")
    assert code == expected and report["error"]["error"] == exc.name


def test_reports_are_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["period", "running", "--out", str(a)]) == 0
    assert cli.main(["period", "running", "--out", str(b)]) == 0
    assert a.read_text() == b.read_text()
    data = json.loads(a.read_text())
    assert "timing_seconds" not in data and len(data["input_fingerprint"]) == 64
    other, _ = run("period", "running", "--mode", "rational")
    assert other["input_fingerprint"] != data["input_fingerprint"]
    timed, _ = run("period", "running", "--timing")
    assert timed["timing_seconds"] >= 0


def test_text_format(tmp_path):
    out = tmp_path / "r.txt"
    assert cli.main(["period", "running", "--format", "text", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("command: period") and "O(5^" in text


def test_period_split_and_running():
    report, code = run("period", "split", "--mode", "rational")
    assert code == 0 and report["outputs"]["identity_loop"] is True
    report, _ = run("period", "running", "--mode", "rational")
    assert report["outputs"]["uL"] == ["5/4"] and report["outputs"]["identity_loop"] is False


def test_locreal_elimination_needs_rational_mode():
    report, code = run("locreal", "nonabelian", "--eliminate")
    assert code == 2 and "rational" in report["error"]["message"]
    report, code = run("locreal", "nonabelian", "--eliminate", "--mode", "rational")
    assert code == 0 and report["outputs"]["image_ideal"]["generators"] == ["y1", "y2", "y3", "y5", "y7"]


def test_verify_and_bklog():
    report, code = run("verify", "abelian", "--mode", "rational")
    suites = report["outputs"]["suites"]
    assert code == 0 and suites["left"]["agreed"] == suites["right"]["agreed"] == 100
    assert suites["periods-bk"]["ok"]
    report, code = run("bklog", "running", "--ext", "kummer", "--mode", "rational")
    assert code == 0 and report["outputs"]["log"] == ["15/4", "0"]


def test_selmer_and_split():
    report, code = run("selmer", "nonabelian", "--mode", "rational")
    assert code == 0 and all(t["recovers_twist"] for t in report["outputs"]["torsors"].values())
    report, code = run("split", "running", "--kind", "hodge", "--mode", "rational")
    assert code == 0


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "ckperiods.cli", "period", "running", "--mode", "rational"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["outputs"]["uL"] == ["5/4"]
