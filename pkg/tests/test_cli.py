"""Command-line workflows: every subcommand, exit codes, determinism."""

import json
import subprocess
import sys

import pytest

from isoconv.fixtures import fixture_path

EX1 = str(fixture_path("ex1"))


def run_cli(*args, check=True):
    proc = subprocess.run(
        [sys.executable, "-m", "isoconv.cli", *args],
        capture_output=True,
        text=True,
    )
    if check and proc.returncode != 0:
        raise AssertionError(f"cli failed: {proc.returncode}\n{proc.stderr}")
    return proc


def test_check_report(tmp_path):
    out = tmp_path / "report.json"
    run_cli("check", EX1, "--window-L", "3", "-o", str(out))
    report = json.loads(out.read_text())
    assert report["reachable"] is True
    assert report["observable"] is True
    assert report["output_observable"] is True
    assert report["gdp"] is False  # strict subset check fails at column 0
    assert report["gdp_witness_columns"] == [0]
    assert report["rank_T"] == 4
    assert report["mdp_minors"] is False
    assert report["window_L"] == 3
    assert report["window_L_formula"] == 4


def test_check_text_format():
    proc = run_cli("check", EX1, "--window-L", "3", "--format", "text")
    assert "reachable: True" in proc.stdout


def test_encoder_subcommand(tmp_path):
    out = tmp_path / "encoder.json"
    run_cli("encoder", EX1, "-o", str(out))
    payload = json.loads(out.read_text())
    assert payload["external_degree"] == 3
    assert sorted(payload["column_degrees"]) == [1, 2]
    assert payload["encoder"]["rows"] == 3


def test_encode_subcommand():
    proc = run_cli("encode", EX1, "--input", "[[[1]],[[0]]]")
    payload = json.loads(proc.stdout)
    assert payload["membership"] is True
    assert payload["codeword"]["entries"] == [[[2, 1]], [[0, 1]], [[]]]


def test_encode_rejects_noncompletable(tmp_path):
    system = {
        "field": {"p": 2, "r": 1},
        "n": 2, "k": 1, "delta": 1,
        "A": [[1]], "B": [[1]], "C": [[1]], "D": [[1]],
    }
    f = tmp_path / "sys.json"
    f.write_text(json.dumps(system))
    proc = run_cli("encode", str(f), "--input", "[[[1]]]", check=False)
    assert proc.returncode == 1
    assert "error" in json.loads(proc.stderr)


def test_transform_matches_fixture_and_round_trips(tmp_path):
    qfile = tmp_path / "q.json"
    qfile.write_text(json.dumps({"rows": 2, "cols": 2, "entries": [[1, 1], [1, 2]]}))
    out = tmp_path / "s2.json"
    run_cli("transform", EX1, "--action", "parity", "--matrix", str(qfile), "-o", str(out))
    s2 = json.loads(out.read_text())
    assert s2["B"] == [[0, 0], [2, 1], [1, 1]]
    assert s2["D"] == [[2, 0]]
    back = tmp_path / "back.json"
    run_cli("transform", str(out), "--action", "parity", "--matrix", str(qfile),
            "--invert", "-o", str(back))
    assert json.loads(back.read_text()) == json.loads(open(EX1).read())


def test_transform_singular_matrix_domain_error(tmp_path):
    qfile = tmp_path / "q.json"
    qfile.write_text(json.dumps({"rows": 2, "cols": 2, "entries": [[1, 1], [2, 2]]}))
    proc = run_cli("transform", EX1, "--action", "parity", "--matrix", str(qfile), check=False)
    assert proc.returncode == 1
    assert "error" in json.loads(proc.stderr)


def test_analyze_with_distances(tmp_path):
    out = tmp_path / "analysis.json"
    run_cli("analyze", EX1, "--window-L", "3", "--distances", "--horizon", "3",
            "-o", str(out))
    payload = json.loads(out.read_text())
    assert payload["singleton_bound"] == 6
    assert payload["column_bounds"] == [2, 3, 4, 5]
    profile = payload["distance_profile"]
    assert profile["column_distances"][0] == 2
    assert profile["dfree_estimate"] <= 6
    assert payload["T"]["rows"] == 4 and payload["T"]["cols"] == 11


def test_simulate_deterministic(tmp_path):
    r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
    args = [
        "simulate", "--system", EX1, "--length", "120", "--erasure-prob", "0.05",
        "--model", "iid", "--seed", "42", "--window-L", "3",
    ]
    run_cli(*args, "--report", str(r1))
    run_cli(*args, "--report", str(r2))
    assert r1.read_bytes() == r2.read_bytes()
    payload = json.loads(r1.read_text())
    assert payload["mismatches"] == []
    assert payload["erased"] == payload["recovered"] + payload["unresolved"]


def test_simulate_burst_and_stream_dump(tmp_path):
    report = tmp_path / "r.json"
    dump = tmp_path / "stream.jsonl"
    run_cli(
        "simulate", "--system", EX1, "--length", "90", "--model", "burst",
        "--burst-len", "2", "--burst-gap", "40", "--seed", "7",
        "--window-L", "3", "--report", str(report), "--dump-stream", str(dump),
    )
    payload = json.loads(report.read_text())
    assert payload["erased"] > 0
    lines = dump.read_text().strip().splitlines()
    assert len(lines) == 30
    assert any("null" in line for line in lines)


def test_search_deterministic(tmp_path):
    out1, out2 = tmp_path / "a.ndjson", tmp_path / "b.ndjson"
    args = [
        "search", "--field", '{"p":3,"r":1}', "--n", "3", "--k", "2", "--delta", "3",
        "--flags", "reachable,observable", "--budget", "60", "--seed", "7",
    ]
    run_cli(*args, "-o", str(out1))
    run_cli(*args, "-o", str(out2))
    assert out1.read_bytes() == out2.read_bytes()
    lines = out1.read_text().strip().splitlines()
    assert lines
    first = json.loads(lines[0])
    assert first["seed"] == 7 and "system" in first


def test_equiv_subcommand(tmp_path):
    qfile = tmp_path / "q.json"
    qfile.write_text(json.dumps({"rows": 2, "cols": 2, "entries": [[1, 1], [1, 2]]}))
    s2file = tmp_path / "s2.json"
    run_cli("transform", EX1, "--action", "parity", "--matrix", str(qfile), "-o", str(s2file))
    proc = run_cli("equiv", EX1, str(s2file))
    verdict = json.loads(proc.stdout)
    assert verdict["equivalent"] is False
    assert "separating_word" in verdict
    proc = run_cli("equiv", EX1, EX1)
    verdict = json.loads(proc.stdout)
    assert verdict["equivalent"] is True and verdict["permutation"] == [0, 1, 2]


def test_probe_conjecture_deterministic(tmp_path):
    sysfile = tmp_path / "mdp.json"
    sysfile.write_text(json.dumps({
        "field": {"p": 5, "r": 1},
        "n": 3, "k": 1, "delta": 1,
        "A": [[2]], "B": [[1]], "C": [[1], [3]], "D": [[1], [2]],
    }))
    out1, out2 = tmp_path / "p1.json", tmp_path / "p2.json"
    args = ["probe-conjecture", str(sysfile), "--trials", "8", "--seed", "3",
            "--kind", "information"]
    run_cli(*args, "-o", str(out1))
    run_cli(*args, "-o", str(out2))
    assert out1.read_bytes() == out2.read_bytes()
    payload = json.loads(out1.read_text())
    assert payload["trials"] == 8
    assert payload["survived"] == len(payload["candidates"])
    assert "empirical" in payload["note"]


def test_probe_conjecture_rejects_non_mdp(tmp_path):
    sysfile = tmp_path / "bad.json"
    sysfile.write_text(json.dumps({
        "field": {"p": 2, "r": 1},
        "n": 2, "k": 1, "delta": 2,
        "A": [[0, 0], [1, 0]], "B": [[1], [0]], "C": [[1, 0]], "D": [[1]],
    }))
    proc = run_cli("probe-conjecture", str(sysfile), "--trials", "2", "--seed", "1", check=False)
    assert proc.returncode == 1


def test_usage_error_exit_code():
    proc = run_cli("check", check=False)
    assert proc.returncode == 2
    proc = run_cli("frobnicate", check=False)
    assert proc.returncode == 2


def test_missing_file_is_domain_error():
    proc = run_cli("check", "no-such-file.json", check=False)
    assert proc.returncode == 1
