from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import pytest

from charvar.cli import DEFAULT_SEED, RunConfig, main

DATA = Path(__file__).resolve().parents[1] / "src" / "charvar" / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


def test_traces_reduce(capsys):
    code, rep, _ = run_json(capsys, "traces", "reduce", "a b^-1")
    assert code == 0 and rep["ok"]
    assert rep["polynomial"] == "x*y - z"
    assert rep["seed"] == DEFAULT_SEED


def test_traces_reduce_rank3(capsys):
    code, rep, _ = run_json(capsys, "traces", "reduce", "a c b", "--rank", "3")
    assert code == 0
    assert rep["polynomial"] == "-x1*x2*x3 + x1*x23 + x2*x13 + x3*x12 - x123"


def test_klein_enumerate(capsys):
    code, rep, _ = run_json(capsys, "klein", "enumerate")
    assert code == 0 and rep["ok"]
    pts = {(p["x"], p["y"], p["z"], p["family"]) for p in rep["points"]}
    assert ("0", "0", "2", "A") in pts and ("0", "0", "-2", "B") in pts
    assert len(pts) == 6


def test_seifert_commands(capsys):
    code, rep, _ = run_json(capsys, "seifert", "disk-cone", "2", "3")
    assert code == 0 and rep["ok"]
    code, rep, _ = run_json(capsys, "seifert", "case-table", "3", "5", "2", "1")
    assert code == 0 and rep["ok"]
    assert rep["result"]["forced_class"] == "ah"


def test_compat_solve(capsys):
    code, rep, _ = run_json(capsys, "compat", "solve", str(DATA / "twist_knot_graph.json"))
    assert code == 0 and rep["result"]["satisfiable"]
    assert rep["result"]["families"]["0"] in ("A", "B")


def test_compat_conflict_exits_nonzero(capsys):
    code, rep, err = run_json(capsys, "compat", "solve", str(DATA / "conflict_graph.json"))
    assert code == 1 and not rep["result"]["satisfiable"]
    assert rep["result"]["conflicting_edges"] == [{"from": 0, "to": 1}]
    assert "verification failed" in err


def test_ideal_build(capsys, tmp_path):
    out = tmp_path / "ideal.json"
    code, stdout, _ = run(capsys, "ideal", "build", "4", "--out", str(out))
    assert code == 0 and stdout == ""
    rep = json.loads(out.read_text())
    assert rep["ideal"]["reduced_count"] == 17


def test_pretzel_verify(capsys):
    code, rep, _ = run_json(capsys, "pretzel", "verify")
    assert code == 0 and rep["ok"]
    names = {c["name"] for c in rep["checks"]}
    assert len(names) >= 6


def test_trace_curve_csv(capsys):
    code, out, _ = run(capsys, "pretzel", "trace-curve", "--radii", "10,100,1000,10000")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 8
    assert {"radius", "branch", "residual"} <= set(rows[0])
    assert all(float(r["residual"]) < 1e-10 for r in rows)


def test_trace_curve_watch_list(capsys):
    code, out, _ = run(capsys, "pretzel", "trace-curve", "--watch", "a,[m1,l1]")
    assert code == 0
    header = next(csv.reader(io.StringIO(out)))
    assert "tr([m1,l1])_re" in header and "tr(l1)_re" in header


def test_trace_curve_json(capsys):
    code, rep, _ = run_json(capsys, "pretzel", "trace-curve", "--format", "json")
    assert code == 0 and rep["ok"]


@pytest.mark.parametrize("argv", [
    ["traces", "reduce", "a q"],
    ["seifert", "disk-cone", "1", "3"],
    ["ideal", "build", "1"],
    ["pretzel", "verify", "--samples", "1"],
    ["pretzel", "trace-curve", "--radii", "100,10"],
])
def test_errors_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_parse_error_names_position(capsys):
    _, _, err = run(capsys, "traces", "reduce", "a^x")
    assert "position 2" in err


def test_bad_graph_file(capsys, tmp_path):
    bad = tmp_path / "g.json"
    bad.write_text("{oops")
    code, _, err = run(capsys, "compat", "solve", str(bad))
    assert code == 2 and str(bad) in err and "line 1" in err
    code, _, err = run(capsys, "compat", "solve", str(tmp_path / "missing.json"))
    assert code == 2


def test_bad_determinant_graph(capsys, tmp_path):
    g = json.loads((DATA / "twist_knot_graph.json").read_text())
    g["edges"][0]["matrix"] = [[2, 0], [0, 1]]
    path = tmp_path / "g.json"
    path.write_text(json.dumps(g))
    code, _, err = run(capsys, "compat", "solve", str(path))
    assert code == 2 and "determinant" in err


def test_seed_env(capsys, monkeypatch):
    monkeypatch.setenv("CHARVAR_SEED", "7")
    _, rep, _ = run_json(capsys, "traces", "reduce", "a")
    assert rep["seed"] == 7
    monkeypatch.setenv("CHARVAR_SEED", "x")
    code, _, _ = run(capsys, "traces", "reduce", "a")
    assert code == 2


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig("x", residual_tol=0).validate()
    with pytest.raises(ValueError):
        RunConfig("x", samples=1).validate()
    with pytest.raises(ValueError):
        RunConfig("x", fmt="xml").validate()


@pytest.mark.parametrize("argv", [
    ["traces", "reduce", "a^3 b a b a b"],
    ["pretzel", "verify"],
    ["pretzel", "trace-curve"],
    ["compat", "solve", str(DATA / "three_piece_graph.json")],
])
def test_byte_identical_repeats(capsys, argv):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second
