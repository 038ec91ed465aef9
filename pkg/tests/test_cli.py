from __future__ import annotations

import csv
import io
import json

import pytest

from spectral_moduli.blowup import alpha0
from spectral_moduli.cli import run


def _run(argv, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def test_alpha0():
    code, out, _ = _run(["alpha0"])
    assert code == 0
    d = json.loads(out)
    assert d["schema"] == 1 and 1.3039 < d["alpha0"] < 1.3049


def test_basis_zero_roots_is_argument_error():
    code, _, err = _run(["basis", "--roots", "0,0"])
    assert code == 2 and "nonzero" in err


def test_basis_in_S21():
    code, out, _ = _run(["basis", "--roots", "0.37919179950438875+0.1517734586755731j,"
                                              "0.37919179950439175-0.15177345867557368j"])
    d = json.loads(out)
    assert code == 0 and d["in_S21"] and min(d["phi"]) > 0


def test_wente_row():
    code, out, _ = _run(["wente", "--alpha-plus", "1"])
    assert code == 0
    (row,) = list(csv.DictReader(io.StringIO(out)))
    assert float(row["a_plus"]) == 1.0
    assert abs(float(row["a_minus"]) - (17 + 4 * alpha0())) < 1e-8
    assert abs(float(row["phi1"]) - float(row["phi2"])) < 1e-6


def test_wente_needs_input():
    assert _run(["wente"])[0] == 2
    assert _run(["wente", "--alpha-plus-grid", "1,-2"])[0] == 2


def test_unknown_subcommand_and_bad_tolerance():
    assert _run(["nope"])[0] == 2
    assert _run(["--ode-tol", "1e-2", "--boundary-eps", "1e-3", "alpha0"])[0] == 2


def test_threads_env(monkeypatch):
    monkeypatch.setenv("WHITHAM_THREADS", "zero")
    assert _run(["alpha0"])[0] == 2


def test_tables_are_deterministic(tmp_path):
    f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert _run(["--out", str(f1), "phia", "--points", "5"])[0] == 0
    assert _run(["--out", str(f2), "phia", "--points", "5"])[0] == 0
    assert f1.read_bytes() == f2.read_bytes()
    rows = list(csv.reader(io.StringIO(f1.read_text())))
    assert rows[0] == ["s", "value"] and len(rows) == 6


def test_gcurve_json():
    code, out, _ = _run(["--format", "json", "gcurve", "--points", "3"])
    d = json.loads(out)
    assert code == 0 and d["schema"] == 1 and len(d["rows"]) == 3


def test_flow_and_classify(tmp_path):
    traj = tmp_path / "t.jsonl"
    code, _, _ = _run(["--out", str(traj), "flow", "--dt", "0.02,0", "--no-periods"])
    assert code == 0
    recs = [json.loads(s) for s in traj.read_text().splitlines()]
    assert recs[0]["schema"] == 1 and "end" in recs[-1]
    assert abs(recs[-1]["end"]["translation_error"]) < 1e-6
    # an interior trajectory has no boundary case: numerical failure, exit 3
    code, _, err = _run(["classify", "--trajectory-file", str(traj)])
    assert code == 3 and json.loads(err)["error"] == "unclassifiable"


def test_classify_missing_file(tmp_path):
    assert _run(["classify", "--trajectory-file", str(tmp_path / "none")])[0] == 2


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_triangle_single_cell(fmt, monkeypatch):
    monkeypatch.setenv("WHITHAM_THREADS", "1")
    code, out, _ = _run(["--format", fmt, "triangle", "--grid", "1"])
    assert code == 0
    if fmt == "csv":
        (row,) = list(csv.DictReader(io.StringIO(out)))
        assert row["status"] == "ok" and float(row["residual"]) < 1e-6
    else:
        assert json.loads(out)["cells"][0]["status"] == "ok"


def test_locate_torus_json():
    code, out, _ = _run(["locate-torus", "--p1", "0.45", "--p2", "0.44"])
    d = json.loads(out)
    assert code == 0 and d["schema"] == 1
    assert abs(d["frame"]["phi"][0] - 0.45 * 3.141592653589793) < 1e-6
