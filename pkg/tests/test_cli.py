"""Command line surface: run/replay/report/bench subcommands."""

import json

import pytest

from rovteleop.cli import main


def test_run_idle_json(capsys, tmp_path):
    rc = main(
        ["run", "--scenario", "golden", "--operator", "idle", "--limit-s", "1", "--json"]
    )
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["completed"] is False
    assert out["elapsed_s"] == pytest.approx(1.0)


def test_run_record_then_replay_and_report(capsys, tmp_path):
    log = str(tmp_path / "session.jsonl")
    rc = main(
        [
            "run",
            "--scenario",
            "golden",
            "--operator",
            "optimal",
            "--record",
            log,
            "--json",
        ]
    )
    assert rc == 0
    run_metrics = json.loads(capsys.readouterr().out)
    assert run_metrics["completed"] is True
    assert run_metrics["subtasks_completed"] == 7

    rc = main(["replay", "--log", log, "--json"])
    assert rc == 0
    replay_metrics = json.loads(capsys.readouterr().out)
    assert replay_metrics == run_metrics

    rc = main(["report", "--logs", str(tmp_path), "--json"])
    assert rc == 0
    agg = json.loads(capsys.readouterr().out)
    assert agg["sessions"] == 1
    assert agg["totals"]["subtasks_completed"] == 7


def test_report_empty_dir_fails(tmp_path, capsys):
    assert main(["report", "--logs", str(tmp_path)]) == 2


def test_bench_csv(tmp_path, capsys):
    out = str(tmp_path / "steps.csv")
    rc = main(["bench-step-response", "--out", out])
    assert rc == 0
    with open(out) as fh:
        header = fh.readline().strip()
    assert header == "t_ms,target,gripper_true,gripper_reported,command_width_us"


def test_unknown_scenario_fails_cleanly(capsys):
    rc = main(["run", "--scenario", "/no/such/file.yaml", "--operator", "idle"])
    assert rc == 2
    assert "scenario error" in capsys.readouterr().err


def test_live_operator_points_at_serve(capsys):
    rc = main(["run", "--operator", "live"])
    assert rc == 2
    assert "serve" in capsys.readouterr().err


def test_run_human_readable(capsys):
    rc = main(["run", "--scenario", "golden", "--operator", "idle", "--limit-s", "0.5"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "completed: False" in out
    assert "subtasks_completed: 0" in out
