import json
import re
from pathlib import Path

import pytest

from sgtsim.cli import main

NOISELESS_RUN = {
    "dim": 3,
    "iterations": 200,
    "seed": 77,
    "oracle": "exact",
    "noise": {"max_counts": 10**9, "crosstalk": 0.0},
    "preparation": None,
}

TINY_PLAN = {
    "dims": [3],
    "count_levels": [1000],
    "population": 3,
    "iterations": {"3": 40},
    "base_seed": 99,
}


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return p


def test_run_noiseless_prints_small_infidelity(tmp_path, capsys):
    cfg = _write(tmp_path, "run.json", NOISELESS_RUN)
    rc = main(["run", "--config", str(cfg), "--out", str(tmp_path / "out")])
    assert rc == 0
    out = capsys.readouterr().out
    match = re.search(r"final infidelity: ([0-9.e+-]+)", out)
    assert match and float(match.group(1)) < 1e-3
    assert (tmp_path / "out" / "trajectory.json").exists()
    assert (tmp_path / "out" / "trajectory.csv").exists()
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert manifest["status"] == "ok"
    assert len(manifest["artifacts"]) == 2


def test_run_missing_config_is_diagnosed(tmp_path, capsys):
    rc = main(["run", "--config", str(tmp_path / "absent.json"), "--out", str(tmp_path)])
    assert rc == 2
    assert "absent.json" in capsys.readouterr().err


def test_seed_override_changes_outputs(tmp_path):
    cfg = _write(tmp_path, "run.json", NOISELESS_RUN)
    main(["run", "--config", str(cfg), "--out", str(tmp_path / "a")])
    main(["run", "--config", str(cfg), "--out", str(tmp_path / "b")])
    main(["run", "--config", str(cfg), "--out", str(tmp_path / "c"), "--seed", "123"])
    a = (tmp_path / "a" / "trajectory.json").read_bytes()
    b = (tmp_path / "b" / "trajectory.json").read_bytes()
    c = (tmp_path / "c" / "trajectory.json").read_bytes()
    assert a == b
    assert a != c


def test_replay_verifies_stored_trajectory(tmp_path, capsys):
    cfg = _write(tmp_path, "run.json", dict(NOISELESS_RUN, iterations=30))
    main(["run", "--config", str(cfg), "--out", str(tmp_path / "out")])
    traj_path = tmp_path / "out" / "trajectory.json"
    rc = main(["replay", "--trajectory", str(traj_path)])
    assert rc == 0
    assert "bit-for-bit" in capsys.readouterr().out


def test_replay_detects_tampering(tmp_path):
    cfg = _write(tmp_path, "run.json", dict(NOISELESS_RUN, iterations=30))
    main(["run", "--config", str(cfg), "--out", str(tmp_path / "out")])
    traj_path = tmp_path / "out" / "trajectory.json"
    doc = json.loads(traj_path.read_text())
    doc["records"][10]["n_plus"] += 1
    traj_path.write_text(json.dumps(doc))
    assert main(["replay", "--trajectory", str(traj_path)]) == 1


def test_batch_writes_runs_summaries_manifest(tmp_path):
    cfg = _write(tmp_path, "plan.json", TINY_PLAN)
    out = tmp_path / "out"
    rc = main(["batch", "--config", str(cfg), "--out", str(out)])
    assert rc == 0
    runs = sorted((out / "runs").glob("*.json"))
    assert len(runs) == 3
    assert (out / "summary_d3_N1000.csv").exists()
    manifest = json.loads((out / "manifest.json").read_text())
    assert len(manifest["artifacts"]) == 4


def test_summarize_from_directory(tmp_path, capsys):
    cfg = _write(tmp_path, "plan.json", TINY_PLAN)
    out = tmp_path / "out"
    main(["batch", "--config", str(cfg), "--out", str(out)])
    rc = main(["summarize", str(out / "runs"), "--out", str(tmp_path / "sum")])
    assert rc == 0
    assert (tmp_path / "sum" / "summary_d3_N1000.csv").exists()
    # same numbers as the batch-level summary
    a = (out / "summary_d3_N1000.csv").read_bytes()
    b = (tmp_path / "sum" / "summary_d3_N1000.csv").read_bytes()
    assert a == b


def test_plot_emits_figure_and_data(tmp_path):
    cfg = _write(tmp_path, "plan.json", TINY_PLAN)
    out = tmp_path / "out"
    main(["batch", "--config", str(cfg), "--out", str(out)])
    rc = main([
        "plot", str(out / "summary_d3_N1000.csv"),
        "--out", str(tmp_path / "fig"), "--name", "conv",
    ])
    assert rc == 0
    assert (tmp_path / "fig" / "conv.svg").exists()
    data = (tmp_path / "fig" / "conv_data.csv").read_text().splitlines()
    assert data[0].startswith("iteration,")
    assert len(data) == 1 + TINY_PLAN["iterations"]["3"]


def test_plot_rejects_inconsistent_series(tmp_path, capsys):
    cfg = _write(tmp_path, "plan.json", TINY_PLAN)
    other = dict(TINY_PLAN, iterations={"3": 25})
    cfg2 = _write(tmp_path, "plan2.json", other)
    main(["batch", "--config", str(cfg), "--out", str(tmp_path / "o1")])
    main(["batch", "--config", str(cfg2), "--out", str(tmp_path / "o2")])
    rc = main([
        "plot",
        str(tmp_path / "o1" / "summary_d3_N1000.csv"),
        str(tmp_path / "o2" / "summary_d3_N1000.csv"),
        "--out", str(tmp_path / "fig"),
    ])
    assert rc == 2
    assert not (tmp_path / "fig" / "convergence.svg").exists()


def test_compare_and_budget_commands(tmp_path, capsys):
    plan = dict(TINY_PLAN, population=4, iterations={"3": 80})
    cfg = _write(tmp_path, "plan.json", plan)
    rc = main(["compare", "--config", str(cfg), "--out", str(tmp_path / "cmp")])
    assert rc == 0
    table = (tmp_path / "cmp" / "comparison.csv").read_text().splitlines()
    assert table[0] == "method,dim,max_counts,median_fidelity,q25_fidelity,q75_fidelity"
    assert len(table) == 3  # header + sgt + mlst
    out = capsys.readouterr().out
    assert "SGT" in out and "MLST" in out

    rc = main([
        "budget", "--config", str(cfg), "--out", str(tmp_path / "bud"),
    ])
    assert rc == 0
    table = (tmp_path / "bud" / "budget_table.csv").read_text().splitlines()
    assert len(table) == 1 + 7  # one cell per condition
    assert (tmp_path / "bud" / "budget_baseline_d3_N1000.csv").exists()
