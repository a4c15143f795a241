import csv
import json
import shutil
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from betasheaf.cli import main
from betasheaf.resources import data_path
from betasheaf.varfile import load
from betasheaf.varieties import resolve_variety

FIXTURES = Path(__file__).parent / "fixtures"


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_text(capsys):
    code, out, _ = run(["classify", "--variety", "S:4", "--form", "x*dy/z^2"], capsys)
    assert code == 0
    assert "InAlphaDecidedMonomial" in out


@pytest.mark.parametrize("variety, form", [("S:4", "dx^dy/z^3"), ("curve35", "y^2*dy/x"), ("M:3", "x*dy/u")])
def test_classify_json_matches_schema(variety, form, capsys):
    schema = json.loads(Path(data_path("classify.schema.json")).read_text())
    code, out, _ = run(["classify", "--variety", variety, "--form", form, "--json"], capsys)
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, schema)
    assert doc["schema"] == "betasheaf.report/1" and doc["command"] == "classify"


@pytest.mark.parametrize("argv", [
    ["classify", "--variety", "S:4", "--form", "x*dy/z^2", "--json"],
    ["stokes", "--case", "disc", "--json"],
    ["verify-paper", "--scope", "curve35", "--json"],
])
def test_json_reports_are_byte_identical(argv, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert main(argv + ["--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_input_errors_exit_2(capsys):
    code, _, err = run(["classify", "--variety", "S:4", "--form", "dx^^dy"], capsys)
    assert code == 2 and "^" in err
    assert run(["classify", "--variety", "S:1", "--form", "dx"], capsys)[0] == 2
    assert run(["integrate", "--case", "nosuch"], capsys)[0] == 2
    assert run(["frobnicate"], capsys)[0] == 2


def test_failures_exit_1(capsys):
    assert run(["beta", "--variety", "S:4", "--degree", "2", "--level-cap", "1"], capsys)[0] == 1
    assert run(["integrate", "--case", "curve35", "--tol", "1e-15"], capsys)[0] == 1


def test_beta_and_levels(capsys):
    code, out, _ = run(["beta", "--variety", "S:4", "--degree", "2", "--json"], capsys)
    assert code == 0
    assert json.loads(out)["result"]["2"]["p_star"] == 1
    assert run(["levels", "--variety", "curve35", "--degree", "1"], capsys)[0] == 0


def test_pullback_check(capsys):
    code, out, _ = run(["pullback-check", "--map", "q:3", "--json"], capsys)
    assert code == 0 and json.loads(out)["result"]["ok"]


def test_export_round_trip(tmp_path, capsys):
    target = tmp_path / "s4.variety"
    assert run(["export", "--variety", "S:4", "--out", str(target)], capsys)[0] == 0
    assert load(str(target)) == resolve_variety("S:4")
    code, out, _ = run(["classify", "--variety", str(target), "--form", "x*dy/z^2"], capsys)
    assert code == 0 and "InAlphaDecidedMonomial" in out
    assert run(["export", "--variety", "S:4"], capsys)[0] == 2


def test_family_csv_matches_oracle(tmp_path, capsys):
    out = tmp_path / "family.csv"
    assert run(["family", "--csv", str(out)], capsys)[0] == 0
    got = list(csv.DictReader(out.open()))
    want = list(csv.DictReader((FIXTURES / "family_golden.csv").open()))
    assert [r["t"] for r in got] == [r["t"] for r in want]
    for g, w in zip(got, want):
        for key in ("re", "mass"):
            assert abs(float(g[key]) - float(w[key])) <= 1e-10 * abs(float(w[key])) + 1e-20
        assert abs(float(g["im"])) < 1e-15
        assert g["converged"] == w["converged"] == "1"


@pytest.mark.skipif(shutil.which("betasheaf") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["betasheaf", "classify", "--variety", "curve35", "--form", "dy/x"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "NotInAlphaRefuted" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "betasheaf.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "verify-paper" in proc.stdout
