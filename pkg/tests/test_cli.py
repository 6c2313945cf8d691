from __future__ import annotations

import json

import pytest

from ptfcount.cli import run_command
from ptfcount.generate import gen_instance
from ptfcount.ptfc import serialize


def records(capsys):
    return [json.loads(line) for line in capsys.readouterr().out.splitlines()]


@pytest.fixture
def ptf_file(tmp_path):
    path = tmp_path / "p.ptfc"
    path.write_text(serialize(gen_instance("ptf", 12, 2, seed=3)))
    return str(path)


@pytest.fixture
def circuit_file(tmp_path):
    path = tmp_path / "c.ptfc"
    path.write_text(serialize(gen_instance("circuit", 11, 2, 2, seed=4)))
    return str(path)


def test_brute_and_ptf_modes_agree(ptf_file, capsys):
    assert run_command(["count", "--mode", "brute", ptf_file]) == 0
    assert run_command(["count", "--mode", "ptf", ptf_file, "--seed", "7"]) == 0
    brute, ptf = records(capsys)
    assert brute["result"] == ptf["result"] == "count"
    assert brute["value"] == ptf["value"]
    assert ptf["stats"]["seed"] == 7


def test_circuit_mode_and_brute_command(circuit_file, capsys):
    assert run_command(["count", circuit_file, "--A", "5", "--B", "2"]) == 0
    assert run_command(["brute", circuit_file]) == 0
    counted, brute = records(capsys)
    assert counted["value"] == brute["value"]
    assert counted["stats"]["config"]["A"] == 5.0


def test_abstain_exit_code(ptf_file, capsys):
    assert run_command(["count", ptf_file, "--c1", "0.001", "--trees", "2"]) == 2
    (rec,) = records(capsys)
    assert rec["result"] == "abstain" and rec["value"] is None


def test_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.ptfc"
    bad.write_text("ptfc v1\nnvars 2\nptf k=1\nterm 1 : 0\nterm 1 :\n")
    assert run_command(["count", str(bad), "--strict"]) == 1
    assert records(capsys)[0]["result"] == "error"
    assert run_command(["count", str(tmp_path / "missing.ptfc")]) == 1


def test_ptf_mode_rejects_deep_circuits(circuit_file, capsys):
    assert run_command(["count", "--mode", "ptf", circuit_file]) == 1


def test_stats_out_and_determinism(ptf_file, tmp_path, capsys):
    out = tmp_path / "stats.json"
    run_command(["count", ptf_file, "--seed", "3", "--stats-out", str(out)])
    run_command(["count", ptf_file, "--seed", "3", "--workers", "4"])
    a, b = capsys.readouterr().out.splitlines()
    assert a == b
    assert json.loads(out.read_text()) == json.loads(a)["stats"]


def test_timing_flag_adds_wall_time(ptf_file, capsys):
    run_command(["count", ptf_file, "--timing"])
    assert "wall_time" in records(capsys)[0]["stats"]


def test_gen_round_trips_through_count(tmp_path, capsys):
    path = tmp_path / "g.ptfc"
    assert run_command(["gen", "--kind", "circuit", "--n", "10", "--depth", "3", "--seed", "2",
                        "-o", str(path)]) == 0
    assert path.read_text().startswith("ptfc v1\n")
    assert run_command(["count", str(path)]) == 0


def test_bench_small_emits_one_record_per_instance(capsys):
    assert run_command(["bench", "--suite", "small"]) == 0
    recs = records(capsys)
    assert len(recs) == 6
    assert all(r["agrees"] for r in recs)
    assert [r["instance"] for r in recs] == list(range(6))


def test_selftest_subset(capsys):
    assert run_command(["selftest", "--only", "C5"]) == 0
    (rec,) = records(capsys)
    assert rec["check"] == "C5" and rec["passed"]
    assert run_command(["selftest", "--only", "C99"]) == 1
