import json
import os
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from no3l.cli import dispatch

GOLDEN = Path(__file__).parent / "golden"
REGEN = os.environ.get("NO3L_REGEN_GOLDEN") == "1"
VOLATILE = {"started", "finished", "elapsed_ms", "path"}


def run(capsys, *argv):
    code = dispatch(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def strip(doc):
    if isinstance(doc, dict):
        return {k: strip(v) for k, v in doc.items() if k not in VOLATILE}
    if isinstance(doc, list):
        return [strip(v) for v in doc]
    return doc


def same(a, b):
    if isinstance(a, dict):
        return isinstance(b, dict) and a.keys() == b.keys() and all(same(a[k], b[k]) for k in a)
    if isinstance(a, list):
        return isinstance(b, list) and len(a) == len(b) and all(map(same, a, b))
    if isinstance(a, float) and isinstance(b, float):
        return a == pytest.approx(b, rel=1e-12, abs=1e-300)
    return type(a) is type(b) and a == b


CASES = {
    "census_n3": ["census", "--n", "3"],
    "census_n64_compare": ["census", "--n", "64", "--compare"],
    "census_n6_brute": ["census", "--n", "6", "--brute"],
    "constants": ["constants"],
    "estimate_n40_k1.5": ["estimate", "--n", "40", "--k", "1.5"],
    "solve_n5": ["solve", "--n", "5"],
    "count_n4": ["count", "--n", "4"],
    "mc_triples_n10": ["mc", "triples", "--n", "10", "--samples", "20000", "--seed", "1"],
    "mc_survival_n8": ["mc", "survival", "--n", "8", "--k", "0.5", "--samples", "5000", "--seed", "3"],
    "mc_survival_sweep": ["mc", "survival", "--n", "6", "--sweep", "k=0.5:0.7:0.1", "--samples", "2000", "--seed", "4"],
}


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(capsys, name):
    doc = strip(run_json(capsys, *CASES[name]))
    path = GOLDEN / f"{name}.json"
    if REGEN or not path.exists():
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    assert same(doc, json.loads(path.read_text()))


def test_census_payload(capsys):
    doc = run_json(capsys, "census", "--n", "3", "--compare")
    assert doc["t"] == "8" and isinstance(doc["t"], str)
    assert {"main_term", "ratio", "manifest"} <= doc.keys()
    m = doc["manifest"]
    assert m["subcommand"] == "census" and m["parameters"]["n"] == 3
    assert {"tool_version", "started", "finished", "seed"} <= m.keys()


def test_census_brute_agrees(capsys):
    doc = run_json(capsys, "census", "--n", "7", "--brute")
    assert doc["agrees"] and doc["t"] == doc["t_fast"] == "824"


def test_constants_payload(capsys):
    doc = run_json(capsys, "constants")
    assert doc["k_corrected"].startswith("1.813799")
    assert len(doc["k_corrected"].split(".")[1]) == 12


@pytest.mark.parametrize(
    "argv",
    [
        ["census", "--n", "0"],
        ["census", "--n", "20", "--brute"],
        ["count", "--n", "6"],
        ["estimate", "--n", "10", "--k", "0.1"],
        ["mc", "survival", "--n", "3", "--k", "5", "--samples", "10", "--seed", "1"],
        ["solve", "--n", "4", "--target", "lots"],
    ],
)
def test_domain_errors_exit_1(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1 and out == "" and "error" in err


@pytest.mark.parametrize(
    "argv",
    [[], ["census"], ["bogus"], ["mc"], ["census", "--n", "x"], ["mc", "survival", "--n", "4", "--samples", "1", "--seed", "1"]],
)
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        dispatch(argv)
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_threads_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv("NO3L_THREADS", "3")
    doc = run_json(capsys, "mc", "triples", "--n", "5", "--samples", "3000", "--seed", "1")
    assert doc["workers"] == 3 and doc["manifest"]["threads"] == 3
    doc = run_json(capsys, "mc", "triples", "--n", "5", "--samples", "3000", "--seed", "1", "--threads", "2")
    assert doc["workers"] == 2
    monkeypatch.setenv("NO3L_THREADS", "zero")
    assert run(capsys, "constants")[0] == 1


def test_csv_sweep(capsys):
    code, out, _ = run(capsys, "mc", "survival", "--n", "6", "--sweep", "k=0.5:0.8:0.1", "--samples", "500", "--seed", "2", "--csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 5
    header = lines[0].split(",")
    assert {"k", "gap", "gap_stderr", "survivors", "seed", "tool_version"} <= set(header)
    ks = [float(row.split(",")[header.index("k")]) for row in lines[1:]]
    assert ks == [0.5, 0.6, 0.7, 0.8]


def test_estimate_csv(capsys):
    code, out, _ = run(capsys, "estimate", "--n", "30", "--k", "1.2", "--csv")
    header, row = out.strip().splitlines()
    assert "count_log10_bracket_lo" in header.split(",")
    assert len(header.split(",")) == len(row.split(","))


def test_solve_writes_verifiable_witness(capsys, tmp_path):
    path = tmp_path / "w.txt"
    doc = run_json(capsys, "solve", "--n", "6", "--out", str(path))
    assert doc["best_size"] == 12 and doc["proven_optimal"]
    assert path.read_text().startswith("n 6\n")
    v = run_json(capsys, "verify", str(path))
    assert v["valid"] and v["size"] == 12


def test_verify_failure_and_parse_error(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("n 3\n0 0\n1 0\n2 0\n")
    code, out, err = run(capsys, "verify", str(bad))
    assert code == 1 and not json.loads(out)["valid"]
    assert json.loads(out)["triple"] == [[0, 0], [1, 0], [2, 0]]
    junk = tmp_path / "junk.txt"
    junk.write_text("hello\n")
    code, out, err = run(capsys, "verify", str(junk))
    assert code == 1 and "header" in err
    code, _, err = run(capsys, "verify", str(tmp_path / "missing.txt"))
    assert code == 1


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 8))
def test_verify_accepts_every_solve_witness(tmp_path_factory, n):
    path = tmp_path_factory.mktemp("w") / "w.txt"
    assert dispatch(["solve", "--n", str(n), "--out", str(path)]) == 0
    assert dispatch(["verify", str(path)]) == 0


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "no3l", "census", "--n", "4"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["t"] == "44"
