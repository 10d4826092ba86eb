"""File formats: trajectory CSV/JSON, summary tables, configs, manifests.

Delimited trajectory schema (one row per iteration)::

    k, beta, alpha, n_plus, n_minus, delta_n, infidelity,
    e0_re, e0_im, ..., e{d-1}_re, e{d-1}_im

where the e-columns are the real/imaginary parts of the updated estimate's
amplitudes.  Floats are written with shortest round-trip repr, so identical
runs produce byte-identical files.

The JSON trajectory format additionally embeds the full RunSpec, which is
sufficient to replay the run from scratch (no intermediate state is stored
for that purpose).
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path
from typing import Optional

import numpy as np

from .engine import IterationRecord, SgtConfig, Trajectory
from .exceptions import ConfigError
from .experiments import (
    ComparisonRow,
    ExperimentPlan,
    RunSpec,
    SummaryStats,
    derive_seed,
    _STREAM_ENGINE,
    _STREAM_ORACLE,
    _STREAM_PREP,
    _STREAM_TARGET,
)
from .measurement import NoiseModel, PreparationModel
from .schedule import GainSchedule
from .states import DIRECTION_VALUES, QuditState

TRAJECTORY_FORMAT = "sgtsim-trajectory/1"

_DIRECTION_INDEX = {complex(v): i for i, v in enumerate(DIRECTION_VALUES)}


def _fmt(x: float) -> str:
    return repr(float(x))


# --------------------------------------------------------------------------
# dataclass <-> dict codecs (explicit, so the on-disk format stays stable)

def schedule_to_dict(s: GainSchedule) -> dict:
    return {"a": s.a, "A": s.A, "s": s.s, "b": s.b, "t": s.t}


def schedule_from_dict(d: dict) -> GainSchedule:
    try:
        return GainSchedule(**{k: float(d[k]) for k in ("a", "A", "s", "b", "t") if k in d})
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad schedule block: {exc}") from exc


def noise_to_dict(n: NoiseModel) -> dict:
    return {
        "max_counts": n.max_counts,
        "crosstalk": n.crosstalk,
        "electronic_mean": n.electronic_mean,
        "electronic_std": n.electronic_std,
        "subtraction_offset": n.subtraction_offset,
        "electronic_enabled": n.electronic_enabled,
        "shot_noise_enabled": n.shot_noise_enabled,
    }


def noise_from_dict(d: dict) -> NoiseModel:
    known = {
        "max_counts": int,
        "crosstalk": float,
        "electronic_mean": float,
        "electronic_std": float,
        "subtraction_offset": float,
        "electronic_enabled": bool,
        "shot_noise_enabled": bool,
    }
    kwargs = {}
    for key, value in d.items():
        if key not in known:
            raise ConfigError(f"unknown noise field {key!r}")
        kwargs[key] = known[key](value)
    try:
        return NoiseModel(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"bad noise block: {exc}") from exc


def preparation_to_dict(p: Optional[PreparationModel]) -> Optional[dict]:
    if p is None:
        return None
    return {"mean_infidelity": p.mean_infidelity, "infidelity_std": p.infidelity_std}


def preparation_from_dict(d: Optional[dict]) -> Optional[PreparationModel]:
    if d is None:
        return None
    try:
        return PreparationModel(
            mean_infidelity=float(d["mean_infidelity"]),
            infidelity_std=float(d.get("infidelity_std", 0.001)),
        )
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad preparation block: {exc}") from exc


def runspec_to_dict(spec: RunSpec) -> dict:
    return {
        "dim": spec.dim,
        "iterations": spec.iterations,
        "schedule": schedule_to_dict(spec.schedule),
        "noise": noise_to_dict(spec.noise),
        "preparation": preparation_to_dict(spec.preparation),
        "oracle_kind": spec.oracle_kind,
        "engine_seed": spec.engine_seed,
        "oracle_seed": spec.oracle_seed,
        "prep_seed": spec.prep_seed,
        "target_seed": spec.target_seed,
        "target_amplitudes": (
            None
            if spec.target_amplitudes is None
            else [list(pair) for pair in spec.target_amplitudes]
        ),
        "condition": spec.condition,
        "state_index": spec.state_index,
    }


def runspec_from_dict(d: dict) -> RunSpec:
    try:
        return RunSpec(
            dim=int(d["dim"]),
            iterations=int(d["iterations"]),
            schedule=schedule_from_dict(d.get("schedule", {})),
            noise=noise_from_dict(d.get("noise", {})),
            preparation=preparation_from_dict(d.get("preparation")),
            oracle_kind=d.get("oracle_kind", "mqpg"),
            engine_seed=int(d["engine_seed"]),
            oracle_seed=int(d.get("oracle_seed", 0)),
            prep_seed=int(d.get("prep_seed", 0)),
            target_seed=(None if d.get("target_seed") is None else int(d["target_seed"])),
            target_amplitudes=(
                None
                if d.get("target_amplitudes") is None
                else tuple((float(re), float(im)) for re, im in d["target_amplitudes"])
            ),
            condition=d.get("condition", "baseline"),
            state_index=int(d.get("state_index", 0)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad run spec: {exc}") from exc


# --------------------------------------------------------------------------
# trajectories

def _state_to_pairs(state: QuditState) -> list[list[float]]:
    return [[float(c.real), float(c.imag)] for c in state.amplitudes]


def _state_from_pairs(pairs) -> QuditState:
    return QuditState(np.array([re + 1j * im for re, im in pairs]))


def record_to_dict(r: IterationRecord) -> dict:
    return {
        "k": r.k,
        "direction": [_DIRECTION_INDEX[complex(v)] for v in r.direction],
        "beta": r.beta,
        "alpha": r.alpha,
        "n_plus": r.counts_plus,
        "n_minus": r.counts_minus,
        "delta_n": r.delta_n,
        "estimate": _state_to_pairs(r.estimate),
        "infidelity": r.infidelity_vs_target,
        "zero_signal": r.zero_signal,
        "degenerate": r.degenerate,
    }


def trajectory_to_dict(traj: Trajectory) -> dict:
    meta = dict(traj.meta)
    spec = meta.pop("spec", None)
    out = {
        "format": TRAJECTORY_FORMAT,
        "spec": runspec_to_dict(spec) if spec is not None else None,
        "records": [record_to_dict(r) for r in traj.records],
        "final_estimate": _state_to_pairs(traj.final_estimate),
        "target": _state_to_pairs(traj.target) if traj.target is not None else None,
        "meta": meta,
    }
    return out


def trajectory_from_dict(d: dict) -> Trajectory:
    if d.get("format") != TRAJECTORY_FORMAT:
        raise ConfigError(f"not a {TRAJECTORY_FORMAT} document")
    spec = runspec_from_dict(d["spec"]) if d.get("spec") else None
    records = []
    for rd in d["records"]:
        records.append(
            IterationRecord(
                k=int(rd["k"]),
                direction=DIRECTION_VALUES[np.array(rd["direction"], dtype=int)],
                beta=float(rd["beta"]),
                alpha=float(rd["alpha"]),
                counts_plus=int(rd["n_plus"]),
                counts_minus=int(rd["n_minus"]),
                delta_n=float(rd["delta_n"]),
                estimate=_state_from_pairs(rd["estimate"]),
                infidelity_vs_target=(
                    None if rd.get("infidelity") is None else float(rd["infidelity"])
                ),
                zero_signal=bool(rd.get("zero_signal", False)),
                degenerate=bool(rd.get("degenerate", False)),
            )
        )
    config = None
    if spec is not None:
        config = SgtConfig(
            dim=spec.dim,
            iterations=spec.iterations,
            schedule=spec.schedule,
            seed=spec.engine_seed,
        )
    meta = dict(d.get("meta", {}))
    if spec is not None:
        meta["spec"] = spec
    return Trajectory(
        config=config,
        records=records,
        final_estimate=_state_from_pairs(d["final_estimate"]),
        target=_state_from_pairs(d["target"]) if d.get("target") else None,
        meta=meta,
    )


def write_trajectory_json(traj: Trajectory, path) -> None:
    Path(path).write_text(json.dumps(trajectory_to_dict(traj), indent=1) + "\n")


def read_trajectory_json(path) -> Trajectory:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return trajectory_from_dict(data)


def write_trajectory_csv(traj: Trajectory, path) -> None:
    dim = traj.final_estimate.dim
    header = ["k", "beta", "alpha", "n_plus", "n_minus", "delta_n", "infidelity"]
    for j in range(dim):
        header += [f"e{j}_re", f"e{j}_im"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for r in traj.records:
            row = [
                r.k,
                _fmt(r.beta),
                _fmt(r.alpha),
                r.counts_plus,
                r.counts_minus,
                _fmt(r.delta_n),
                "" if r.infidelity_vs_target is None else _fmt(r.infidelity_vs_target),
            ]
            for c in r.estimate.amplitudes:
                row += [_fmt(c.real), _fmt(c.imag)]
            writer.writerow(row)


# --------------------------------------------------------------------------
# summary and comparison tables

def write_summary_csv(stats: SummaryStats, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "median_infidelity", "q25_infidelity", "q75_infidelity"])
        for k in range(stats.iterations):
            writer.writerow(
                [k, _fmt(stats.median[k]), _fmt(stats.q25[k]), _fmt(stats.q75[k])]
            )


def read_summary_csv(path) -> SummaryStats:
    med, q25, q75 = [], [], []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"iteration", "median_infidelity", "q25_infidelity", "q75_infidelity"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ConfigError(f"{path}: not a summary table (columns {reader.fieldnames})")
        for row in reader:
            med.append(float(row["median_infidelity"]))
            q25.append(float(row["q25_infidelity"]))
            q75.append(float(row["q75_infidelity"]))
    if not med:
        raise ConfigError(f"{path}: empty summary table")
    return SummaryStats(
        median=np.array(med), q25=np.array(q25), q75=np.array(q75), population=0
    )


def write_comparison_csv(rows: list[ComparisonRow], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["method", "dim", "max_counts", "median_fidelity", "q25_fidelity", "q75_fidelity"]
        )
        for r in rows:
            writer.writerow(
                [
                    r.method,
                    r.dim,
                    r.max_counts,
                    _fmt(r.median_fidelity),
                    _fmt(r.q25_fidelity),
                    _fmt(r.q75_fidelity),
                ]
            )


# --------------------------------------------------------------------------
# configs

def sha256_of_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def config_digest(obj: dict) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()


def _load_json(path) -> dict:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{p}: top level must be a JSON object")
    return data


def load_run_config(path, seed_override: Optional[int] = None) -> RunSpec:
    """Single-run config file -> RunSpec.

    The file's ``seed`` is the base from which the engine, oracle, prep and
    target streams are derived; an explicit ``target`` block overrides the
    derived target.  See README for the full annotated schema.
    """
    data = _load_json(path)
    try:
        dim = int(data["dim"])
        iterations = int(data["iterations"])
    except KeyError as exc:
        raise ConfigError(f"{path}: missing required field {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    seed = int(data.get("seed", 0)) if seed_override is None else int(seed_override)
    oracle_kind = data.get("oracle", "mqpg")
    target = data.get("target", {})
    target_seed = None
    target_amps = None
    if "amplitudes" in target:
        target_amps = tuple((float(re), float(im)) for re, im in target["amplitudes"])
    elif "haar_seed" in target:
        target_seed = int(target["haar_seed"])
    else:
        target_seed = derive_seed(seed, dim, 0, _STREAM_TARGET)
    return RunSpec(
        dim=dim,
        iterations=iterations,
        schedule=schedule_from_dict(data.get("schedule", {})),
        noise=noise_from_dict(data.get("noise", {})),
        preparation=preparation_from_dict(data.get("preparation")),
        oracle_kind=oracle_kind,
        engine_seed=derive_seed(seed, dim, 0, _STREAM_ENGINE),
        oracle_seed=derive_seed(seed, dim, 0, _STREAM_ORACLE),
        prep_seed=derive_seed(seed, dim, 0, _STREAM_PREP),
        target_seed=target_seed,
        target_amplitudes=target_amps,
    )


def load_plan_config(path, seed_override: Optional[int] = None) -> ExperimentPlan:
    """Experiment-plan config file -> ExperimentPlan (see README schema)."""
    data = _load_json(path)
    kwargs = {}
    if "dims" in data:
        kwargs["dims"] = tuple(int(d) for d in data["dims"])
    if "count_levels" in data:
        kwargs["count_levels"] = tuple(int(n) for n in data["count_levels"])
    if "population" in data:
        kwargs["population"] = int(data["population"])
    if "iterations" in data:
        kwargs["iterations"] = {int(k): int(v) for k, v in data["iterations"].items()}
    if "base_seed" in data:
        kwargs["base_seed"] = int(data["base_seed"])
    if seed_override is not None:
        kwargs["base_seed"] = int(seed_override)
    if "schedule" in data:
        kwargs["schedule"] = schedule_from_dict(data["schedule"])
    if "noise" in data:
        kwargs["noise"] = noise_from_dict(data["noise"])
    if "preparation" in data:
        kwargs["preparation"] = {
            int(k): preparation_from_dict(v) for k, v in data["preparation"].items()
        }
    if "workers" in data:
        kwargs["workers"] = int(data["workers"])
    unknown = set(data) - {
        "dims", "count_levels", "population", "iterations", "base_seed",
        "schedule", "noise", "preparation", "workers",
    }
    if unknown:
        raise ConfigError(f"{path}: unknown plan fields {sorted(unknown)}")
    try:
        return ExperimentPlan(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


# --------------------------------------------------------------------------
# manifest

def write_manifest(out_dir, command: str, config_hash: str, artifacts: list,
                   failures: list[dict]) -> Path:
    """Record what a CLI invocation produced, with content hashes."""
    out_dir = Path(out_dir)
    entries = [
        {"path": str(Path(a).relative_to(out_dir)), "sha256": sha256_of_file(a)}
        for a in artifacts
    ]
    manifest = {
        "command": command,
        "config_sha256": config_hash,
        "artifacts": entries,
        "failures": failures,
        "status": "ok" if not failures else "partial",
    }
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")
    return path
