from __future__ import annotations

import json

import pytest

from syncmdp.cli import main
from conftest import FIXTURES


def run(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_ok(capsys):
    code, out, err = run(capsys, "validate", str(FIXTURES / "ring_funnel.json"))
    assert code == 0
    assert "valid" in out


def test_validate_reports_violations(capsys, tmp_path):
    doc = json.loads((FIXTURES / "two_absorbing.json").read_text())
    doc["transitions"]["a"]["s"] = [{"target": "a", "prob": 0.9}]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out, err = run(capsys, "validate", str(bad))
    assert code == 1
    assert "sum" in err


def test_decide_yes_exit_zero_and_report(capsys):
    code, out, _ = run(
        capsys,
        "decide", str(FIXTURES / "ring_funnel.json"),
        "--mode", "blind", "--objective", "strong",
    )
    assert code == 0
    report = json.loads(out)
    assert report["verdict"]["answer"] == "yes"
    assert report["witness"]["cycle"]["cells"][0] == report["witness"]["cycle"]["cells"][-1]
    assert report["strategy"]["mode"] == "blind"
    assert report["empirical"]["verdict"] == "pass"
    assert report["empirical"]["label"] == "empirical"
    assert report["delta"]


def test_decide_no_exit_one(capsys):
    code, out, _ = run(
        capsys,
        "decide", str(FIXTURES / "two_absorbing.json"),
        "--mode", "perfect", "--objective", "weak",
    )
    assert code == 1
    assert json.loads(out)["verdict"]["answer"] == "no"


def test_decide_inconclusive_exit_two(capsys):
    code, out, _ = run(
        capsys,
        "decide", str(FIXTURES / "two_absorbing.json"),
        "--mode", "perfect", "--objective", "weak", "--max-nodes", "1",
    )
    assert code == 2
    assert json.loads(out)["verdict"]["answer"] == "inconclusive-limit"


def test_decide_bounded_algorithm(capsys):
    code, out, _ = run(
        capsys,
        "decide", str(FIXTURES / "split_merge_loop.json"),
        "--mode", "perfect", "--objective", "weak",
        "--algorithm", "bounded", "--bound", "4",
    )
    assert code == 1
    assert json.loads(out)["config"]["bound"] == 4


def test_decide_out_file(capsys, tmp_path):
    out_file = tmp_path / "report.json"
    code, out, _ = run(
        capsys,
        "decide", str(FIXTURES / "ring_funnel.json"),
        "--mode", "blind", "--objective", "strong", "--out", str(out_file),
    )
    assert code == 0
    assert json.loads(out_file.read_text())["verdict"]["answer"] == "yes"


def test_gen_cerny_pipes_into_decide(capsys, tmp_path, monkeypatch):
    code, out, _ = run(capsys, "gen", "cerny", "-n", "4")
    assert code == 0
    doc = tmp_path / "cerny4.json"
    doc.write_text(out)
    code, out, _ = run(
        capsys, "decide", str(doc), "--mode", "blind", "--objective", "strong"
    )
    assert code == 0


def test_decide_reads_stdin(capsys, monkeypatch):
    import io

    text = (FIXTURES / "two_absorbing.json").read_text()
    monkeypatch.setattr("sys.stdin", io.StringIO(text))
    code, out, _ = run(capsys, "decide", "-", "--mode", "blind", "--objective", "strong")
    assert code == 1


def test_synthesize_then_simulate(capsys, tmp_path):
    strat_file = tmp_path / "strategy.json"
    code, _, _ = run(
        capsys,
        "synthesize", str(FIXTURES / "memory_needed.json"),
        "--mode", "perfect", "--objective", "strong",
        "--strategy-out", str(strat_file),
    )
    assert code == 0
    assert json.loads(strat_file.read_text())["mode"] == "perfect"

    trace_file = tmp_path / "trace.csv"
    code, out, _ = run(
        capsys,
        "simulate", str(FIXTURES / "memory_needed.json"),
        "--strategy", str(strat_file),
        "--steps", "400", "--epsilon", "0.01", "--window", "2",
        "--trace-out", str(trace_file),
    )
    assert code == 0
    summary = json.loads(out)
    assert summary["estimates"]["strong"]["verdict"] == "pass"
    lines = trace_file.read_text().splitlines()
    assert lines[0] == "step,norm"
    assert len(lines) == 402
    step, norm = lines[-1].split(",")
    assert step == "400"
    assert 0.0 < float(norm) <= 1.0


def test_synthesize_no_witness_exit_one(capsys, tmp_path):
    code, _, err = run(
        capsys,
        "synthesize", str(FIXTURES / "two_absorbing.json"),
        "--mode", "blind", "--objective", "strong",
        "--strategy-out", str(tmp_path / "never.json"),
    )
    assert code == 1
    assert "no witness" in err


def test_oracle_delta_agreement(capsys):
    cycle = json.dumps({
        "cells": [["2", "5", "8"], ["3", "5", "6"], ["4", "7", "9"], ["2", "5", "8"]],
        "letters": [
            {"2": "s1", "5": "s1", "8": "s1"},
            {"3": "s1", "5": "s2", "6": "s1"},
            {"4": "s1", "7": "s1", "9": "s1"},
        ],
    })
    code, out, _ = run(
        capsys,
        "oracle", "delta", str(FIXTURES / "twin_threads.json"), "--cycle", cycle,
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["agree"] is True
    assert doc["delta"] == [[["2"], ["3"], ["4"]], [["5"], ["6"], ["7"]]]


def test_syncword_statuses(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "cerny", "-n", "4")
    doc = tmp_path / "c4.json"
    doc.write_text(out)
    code, out, _ = run(capsys, "syncword", str(doc))
    assert code == 0
    assert len(out.split()) == 9

    code, out, _ = run(capsys, "syncword", str(FIXTURES / "ring_funnel.json"))
    assert code == 2
    assert "not deterministic" in out


def test_reports_differ_only_in_timing(capsys):
    def report_without_stats():
        _, out, _ = run(
            capsys,
            "decide", str(FIXTURES / "memory_needed.json"),
            "--mode", "perfect", "--objective", "strong",
        )
        doc = json.loads(out)
        doc["stats"].pop("elapsed_s")
        return doc

    assert report_without_stats() == report_without_stats()


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["decide", "nowhere.json", "--mode", "sideways", "--objective", "strong"])
    assert exc.value.code == 64


def test_missing_file_is_runtime_error(capsys):
    code, _, err = run(
        capsys, "decide", "nowhere.json", "--mode", "blind", "--objective", "strong"
    )
    assert code == 3
    assert "error" in err
