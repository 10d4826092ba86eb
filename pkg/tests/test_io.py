import csv
import json

import numpy as np
import pytest

from sgtsim import ConfigError, ExperimentPlan, RunSpec, execute_run, summarize
from sgtsim import io as sio


def _sample_trajectory():
    spec = RunSpec(
        dim=3,
        iterations=40,
        target_seed=11,
        engine_seed=12,
        oracle_seed=13,
        prep_seed=14,
        preparation=None,
    )
    return execute_run(spec)


def test_trajectory_json_roundtrip(tmp_path):
    traj = _sample_trajectory()
    path = tmp_path / "t.json"
    sio.write_trajectory_json(traj, path)
    back = sio.read_trajectory_json(path)
    assert len(back.records) == len(traj.records)
    for a, b in zip(traj.records, back.records):
        assert a.k == b.k
        assert np.array_equal(a.direction, b.direction)
        assert a.beta == b.beta and a.alpha == b.alpha
        assert a.counts_plus == b.counts_plus and a.counts_minus == b.counts_minus
        assert a.delta_n == b.delta_n
        assert a.infidelity_vs_target == b.infidelity_vs_target
    assert back.meta["spec"] == traj.meta["spec"]


def test_trajectory_roundtrip_preserves_summary_statistics(tmp_path):
    trajs = []
    for i in range(4):
        spec = RunSpec(dim=3, iterations=30, target_seed=i, engine_seed=i + 100,
                       oracle_seed=i + 200)
        trajs.append(execute_run(spec))
    stats = summarize(trajs)
    back = []
    for i, t in enumerate(trajs):
        p = tmp_path / f"{i}.json"
        sio.write_trajectory_json(t, p)
        back.append(sio.read_trajectory_json(p))
    stats2 = summarize(back)
    assert np.array_equal(stats.median, stats2.median)
    assert np.array_equal(stats.q25, stats2.q25)
    assert np.array_equal(stats.q75, stats2.q75)


def test_trajectory_csv_schema(tmp_path):
    traj = _sample_trajectory()
    path = tmp_path / "t.csv"
    sio.write_trajectory_csv(traj, path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    assert header[:7] == ["k", "beta", "alpha", "n_plus", "n_minus", "delta_n", "infidelity"]
    assert header[7:] == ["e0_re", "e0_im", "e1_re", "e1_im", "e2_re", "e2_im"]
    assert len(rows) == 1 + len(traj.records)
    # floats round-trip exactly through repr
    r5 = traj.records[5]
    row = rows[6]
    assert float(row[1]) == r5.beta
    assert float(row[6]) == r5.infidelity_vs_target
    assert float(row[7]) == r5.estimate.amplitudes[0].real


def test_identical_spec_writes_identical_bytes(tmp_path):
    spec = RunSpec(dim=3, iterations=25, target_seed=5, engine_seed=6, oracle_seed=7)
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    sio.write_trajectory_json(execute_run(spec), p1)
    sio.write_trajectory_json(execute_run(spec), p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_summary_csv_roundtrip(tmp_path):
    trajs = [_sample_trajectory()]
    stats = summarize(trajs * 3)
    path = tmp_path / "s.csv"
    sio.write_summary_csv(stats, path)
    back = sio.read_summary_csv(path)
    assert np.array_equal(back.median, stats.median)
    assert np.array_equal(back.q25, stats.q25)
    assert np.array_equal(back.q75, stats.q75)


def test_summary_csv_rejects_other_files(tmp_path):
    path = tmp_path / "junk.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ConfigError):
        sio.read_summary_csv(path)


def test_run_config_loading(tmp_path):
    cfg = {
        "dim": 3,
        "iterations": 50,
        "seed": 9,
        "oracle": "exact",
        "noise": {"max_counts": 1000, "crosstalk": 0.0},
        "preparation": None,
    }
    path = tmp_path / "run.json"
    path.write_text(json.dumps(cfg))
    spec = sio.load_run_config(path)
    assert spec.dim == 3 and spec.iterations == 50
    assert spec.oracle_kind == "exact"
    assert spec.noise.max_counts == 1000
    # same file, same derived seeds
    spec2 = sio.load_run_config(path)
    assert spec == spec2
    # seed override changes every derived stream
    spec3 = sio.load_run_config(path, seed_override=10)
    assert spec3.engine_seed != spec.engine_seed
    assert spec3.target_seed != spec.target_seed


def test_run_config_errors(tmp_path):
    missing = tmp_path / "nope.json"
    with pytest.raises(ConfigError) as err:
        sio.load_run_config(missing)
    assert "nope.json" in str(err.value)

    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 3,\n  "iterations": }')
    with pytest.raises(ConfigError) as err:
        sio.load_run_config(bad)
    assert "line 2" in str(err.value)

    incomplete = tmp_path / "incomplete.json"
    incomplete.write_text('{"dim": 3}')
    with pytest.raises(ConfigError) as err:
        sio.load_run_config(incomplete)
    assert "iterations" in str(err.value)

    unknown = tmp_path / "unknown.json"
    unknown.write_text('{"dim": 3, "iterations": 5, "noise": {"gain": 2}}')
    with pytest.raises(ConfigError) as err:
        sio.load_run_config(unknown)
    assert "gain" in str(err.value)


def test_plan_config_loading(tmp_path):
    cfg = {
        "dims": [3],
        "count_levels": [100, 1000],
        "population": 7,
        "iterations": {"3": 80},
        "base_seed": 321,
        "preparation": {"3": {"mean_infidelity": 0.004}},
    }
    path = tmp_path / "plan.json"
    path.write_text(json.dumps(cfg))
    plan = sio.load_plan_config(path)
    assert plan.dims == (3,) and plan.count_levels == (100, 1000)
    assert plan.population == 7
    assert plan.iterations_for(3) == 80
    assert plan.preparation_for(3).mean_infidelity == 0.004
    with pytest.raises(ConfigError):
        sio.load_plan_config(tmp_path / "absent.json")
    weird = tmp_path / "weird.json"
    weird.write_text('{"dims": [3], "colour": "red"}')
    with pytest.raises(ConfigError) as err:
        sio.load_plan_config(weird)
    assert "colour" in str(err.value)


def test_explicit_target_amplitudes(tmp_path):
    cfg = {
        "dim": 2,
        "iterations": 5,
        "target": {"amplitudes": [[1.0, 0.0], [0.0, 0.0]]},
    }
    path = tmp_path / "run.json"
    path.write_text(json.dumps(cfg))
    spec = sio.load_run_config(path)
    tgt = spec.target_state()
    assert np.allclose(tgt.amplitudes, [1.0, 0.0])


def test_manifest(tmp_path):
    f1 = tmp_path / "a.csv"
    f1.write_text("x\n")
    path = sio.write_manifest(tmp_path, "test", "cafe", [f1], [])
    data = json.loads(path.read_text())
    assert data["status"] == "ok"
    assert data["artifacts"][0]["path"] == "a.csv"
    assert data["artifacts"][0]["sha256"] == sio.sha256_of_file(f1)
    path = sio.write_manifest(tmp_path, "test", "cafe", [f1], [{"error": "boom"}])
    assert json.loads(path.read_text())["status"] == "partial"
