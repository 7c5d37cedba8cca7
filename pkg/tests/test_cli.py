import csv
import io
import json
import subprocess
import sys

import pytest

from kacfusion.cli import main


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_fusion_json_matches_printed_table(capsys, fixture_json):
    code, out, _ = run(capsys, "fusion", "--type", "A2~1", "--level", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["type"] == "A2~1" and doc["level"] == 2
    fx = fixture_json("a2_level2.json")
    assert len(doc["basis"]) == len(fx["basis_order"])


def test_output_is_deterministic(capsys):
    a = run(capsys, "modular", "--type", "A3~2", "--level", "1")[1]
    b = run(capsys, "modular", "--type", "A3~2", "--level", "1")[1]
    assert a == b and a


def test_csv_rows(capsys):
    code, out, _ = run(capsys, "fusion", "--type", "A1~1", "--level", "1", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert {(r["lambda"], r["mu"], r["nu"], r["N"]) for r in rows} >= {("1", "1", "0", "1")}


def test_quotient(capsys):
    code, out, _ = run(capsys, "quotient", "--type", "A5~2", "--level", "1")
    doc = json.loads(out)
    assert code == 0 and doc["source"]["type"] == "B3~1"


def test_failing_check_exits_one(capsys):
    code, out, _ = run(capsys, "check", "--type", "A3~2", "--level", "2", "--checks", "two_thirds")
    assert code == 1


def test_passing_checks(capsys):
    code, _, _ = run(capsys, "check", "--type", "A2~2", "--level", "4",
                     "--checks", "sign_twist,closed_form,associativity")
    assert code == 0
    code, out, _ = run(capsys, "check", "--type", "B3~1,G2~1", "--level", "2",
                       "--checks", "grading,verlinde,relations,cor58")
    assert code == 0


@pytest.mark.parametrize("args", [
    ("fusion", "--type", "A2~2", "--level", "1"),
    ("fusion", "--type", "Z9~1", "--level", "1"),
    ("fusion", "--type", "A2~1", "--level", "0"),
    ("fusion", "--type", "A2~1", "--level-range", "1..2"),
    ("check", "--type", "A2~1", "--level", "1", "--checks", "nope"),
    ("fusion", "--type", "A2~1"),
    ("check", "--type", "A2~2", "--level", "2", "--checks", "grading"),
])
def test_usage_errors_exit_two(capsys, args):
    assert run(capsys, *args)[0] == 2


def test_sweep_resumes(tmp_path, capsys):
    out = tmp_path / "sweep.json"
    args = ("sweep", "--type", "A2~2", "--level-range", "2..4", "--checks", "sign_twist",
            "--out", str(out))
    assert run(capsys, *args)[0] == 0
    manifest = tmp_path / "sweep.json.manifest.json"
    first = json.loads(manifest.read_text())
    assert len(first) == 3
    assert run(capsys, *args)[0] == 0
    assert json.loads(manifest.read_text()) == first
    report = json.loads(out.read_text())
    assert report["passed"] == 3 and report["failed"] == 0


def test_sweep_cell_cap(capsys):
    code = run(capsys, "sweep", "--type", "A1~1", "--level-range", "1..20",
               "--checks", "grading", "--max-cells", "5")[0]
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kacfusion", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "kacfusion" in proc.stdout
