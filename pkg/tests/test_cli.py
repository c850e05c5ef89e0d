import csv
import io
import json
import subprocess
import sys

import pytest

from gp_pursuit.cli import main, play_session
from gp_pursuit.graph import make_graph


def run(*argv, stdin=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        old = sys.stdin
        sys.stdin = io.StringIO(stdin)
    try:
        code = main(list(argv), out, err)
    finally:
        if stdin is not None:
            sys.stdin = old
    return code, out.getvalue(), err.getvalue()


def test_graph_formats():
    code, out, _ = run("graph", "--n", "5", "--k", "2", "--format", "json")
    assert code == 0 and len(json.loads(out)["edges"]) == 15
    code, out, _ = run("graph", "--n", "5", "--k", "2")
    assert out.splitlines()[0] == "a0: a1 a4 b0"


def test_classify():
    code, out, _ = run("classify", "--n", "28", "--k", "8", "--json")
    res = json.loads(out)["results"]
    assert res == {"girth": 7, "tags": ["SevenKOverI"], "family": {"divisor": 2, "exception": True}}
    code, out, _ = run("classify", "--n", "14", "--k", "4")
    assert "family: no" in out


def test_copnumber_text_and_json(tmp_path):
    code, out, _ = run("copnumber", "--n", "5", "--k", "2", "--cache-dir", str(tmp_path))
    assert code == 0 and out.splitlines()[0] == "cop number: 3"
    code, out, _ = run("copnumber", "--n", "5", "--k", "2", "--cache-dir", str(tmp_path), "--json")
    report = json.loads(out)
    assert report["results"]["cop_number"] == 3 and report["table_cache_hit"] is True
    assert set(report) == {"command", "parameters", "results", "wall_time_ms", "worker_count", "table_cache_hit"}


def test_cache_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("GP_PURSUIT_CACHE", str(tmp_path / "env"))
    run("copnumber", "--n", "5", "--k", "2", "--max-cops", "3")
    assert len(list((tmp_path / "env").iterdir())) == 3


def test_results_are_deterministic(tmp_path):
    a = json.loads(run("copnumber", "--n", "14", "--k", "4", "--no-cache", "--json")[1])
    b = json.loads(run("copnumber", "--n", "14", "--k", "4", "--no-cache", "--json", "--threads", "4")[1])
    strip = lambda r: [{k: v for k, v in row.items() if k in ("c", "cops_win", "checksum", "states")} for row in r]  # noqa: E731
    assert strip(a["results"]["per_c"]) == strip(b["results"]["per_c"])
    assert a["results"]["cop_number"] == b["results"]["cop_number"] == 3


def test_exit_codes():
    assert run("graph", "--n", "5", "--k", "3")[0] == 2
    assert run("verify", "--n", "14", "--k", "4", "--lemma", "lemma1")[0] == 2
    assert run("copnumber", "--n", "28", "--k", "8", "--no-cache", "--symmetry", "off", "--budget-gib", "0.001")[0] == 3
    with pytest.raises(SystemExit) as exc:
        run("graph", "--n", "5")
    assert exc.value.code == 2


def test_verify_commands():
    code, out, _ = run("verify", "--n", "42", "--k", "6", "--lemma", "figures", "--json")
    assert code == 0 and json.loads(out)["results"]["violation_count"] == 0
    code, out, _ = run("verify", "--n", "42", "--k", "6", "--lemma", "lemma1", "--scope", "50000", "--json")
    res = json.loads(out)["results"]
    assert code == 0 and res["states_checked"] >= 50000 and res["violation_count"] == 0
    code, out, _ = run("verify", "--n", "42", "--k", "6", "--lemma", "lemma2", "--scope", "50000")
    assert code == 0


def test_play_session_reprompts_and_quits():
    g = make_graph(28, 8)
    out = io.StringIO()
    lines = "a99 a1 a2\na0 a1\na0 a7 b14\na13 a13 a13\na1 a6 b14\nquit\n"
    rep = play_session(g, 3, "strategy", io.StringIO(lines), out)
    text = out.getvalue()
    assert "out of range" in text and "illegal move" in text
    assert rep.results["outcome"] == "quit"
    assert rep.results["transcript"][0].startswith("cops=a0,a7,b14")
    assert rep.results["plies"] == 2 and not rep.results["robber_trapped"]


def test_play_optimal_robber_against_losing_cops():
    g = make_graph(14, 4)
    # two cops lose on GP(14,4); the optimal robber never gets caught
    moves = ["a0 a7"] + ["a0 a7", "a1 a7", "a0 a7", "a0 a6"] * 5
    rep = play_session(g, 2, "optimal", io.StringIO("\n".join(moves) + "\n"), io.StringIO())
    assert rep.results["outcome"] == "quit" and rep.results["plies"] == 40


def test_play_strategy_robber_needs_three_cops():
    from gp_pursuit.errors import ParamError

    with pytest.raises(ParamError):
        play_session(make_graph(28, 8), 2, "strategy", io.StringIO(""), io.StringIO())


def test_bench_small():
    code, out, _ = run("bench", "--suite", "small", "--threads", "4")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 8
    by_cfg = {}
    for row in rows:
        by_cfg.setdefault((row["n"], row["symmetry"]), set()).add(row["checksum"])
        assert row["cops_win"] == "True"
    assert all(len(v) == 1 for v in by_cfg.values())


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gp_pursuit", "classify", "--n", "5", "--k", "2"],
        capture_output=True, text=True, check=True,
    )
    assert "girth: 5" in proc.stdout
