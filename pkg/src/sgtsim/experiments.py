"""Batch orchestration: populations of runs, error budgets, method comparison.

Every run in a batch is described by a fully serializable RunSpec whose seeds
are derived deterministically from (base_seed, dimension, state index, count
level, stream), so any single run can be reproduced in isolation and target
state i is bit-identical across count levels, error-budget toggles and
reconstruction methods.  Toggle and method names deliberately do not enter
the seed derivation: a toggle that leaves every parameter unchanged yields
bit-identical results.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

import numpy as np

from .engine import SgtConfig, Trajectory, run_sgt
from .exceptions import SgtError
from .measurement import (
    ExactOracle,
    MqpgOracle,
    NoiseModel,
    PreparationModel,
    prepare_imperfect_state,
)
from .mle import acquire_tomogram, build_projector_set, fidelity_to_pure, mle_reconstruct
from .schedule import DEFAULT_SCHEDULE, GainSchedule
from .states import QuditState, fidelity, haar_random_state, infidelity

# Stream tags keeping the derived random streams disjoint.
_STREAM_TARGET = 1
_STREAM_PREP = 2
_STREAM_ENGINE = 3
_STREAM_ORACLE = 4
_STREAM_TOMOGRAM = 5


def derive_seed(*fields: int) -> int:
    """Collapse integer fields into one reproducible 64-bit seed.

    Negative fields are mapped to their two's-complement representation so
    user-facing seeds may be any 64-bit integer.
    """
    ss = np.random.SeedSequence([int(f) & 0xFFFFFFFFFFFFFFFF for f in fields])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class RunSpec:
    """Complete, serializable description of one tomography run."""

    dim: int
    iterations: int
    schedule: GainSchedule = DEFAULT_SCHEDULE
    noise: NoiseModel = field(default_factory=NoiseModel)
    preparation: Optional[PreparationModel] = None
    oracle_kind: str = "mqpg"  # "mqpg" (stochastic) or "exact" (deterministic)
    engine_seed: int = 0
    oracle_seed: int = 0
    prep_seed: int = 0
    target_seed: Optional[int] = None
    target_amplitudes: Optional[tuple] = None  # ((re, im), ...) overrides target_seed
    condition: str = "baseline"
    state_index: int = 0

    def __post_init__(self):
        if self.oracle_kind not in ("mqpg", "exact"):
            raise ValueError(f"unknown oracle kind {self.oracle_kind!r}")
        if self.target_seed is None and self.target_amplitudes is None:
            raise ValueError("a target seed or explicit target amplitudes is required")

    def target_state(self) -> QuditState:
        if self.target_amplitudes is not None:
            amps = np.array([re + 1j * im for re, im in self.target_amplitudes])
            if amps.shape != (self.dim,):
                raise ValueError("target amplitudes do not match the dimension")
            return QuditState(amps)
        return haar_random_state(self.dim, np.random.default_rng(self.target_seed))

    def prepared_state(self, target: QuditState) -> QuditState:
        if self.preparation is None:
            return target
        return prepare_imperfect_state(
            target, self.preparation, np.random.default_rng(self.prep_seed)
        )


def execute_run(spec: RunSpec) -> Trajectory:
    """Materialize a RunSpec: build states and oracle, run the engine."""
    target = spec.target_state()
    prepared = spec.prepared_state(target)
    if spec.oracle_kind == "exact":
        oracle = ExactOracle(prepared, spec.noise.max_counts, spec.noise.crosstalk)
    else:
        oracle = MqpgOracle(prepared, spec.noise, np.random.default_rng(spec.oracle_seed))
    config = SgtConfig(
        dim=spec.dim,
        iterations=spec.iterations,
        schedule=spec.schedule,
        seed=spec.engine_seed,
    )
    traj = run_sgt(config, oracle, target=target)
    traj.meta = {
        "spec": spec,
        "final_fidelity_ideal": fidelity(traj.final_estimate, target),
        "final_fidelity_prepared": fidelity(traj.final_estimate, prepared),
        "prepared_infidelity": infidelity(prepared, target),
    }
    return traj


@dataclass(frozen=True)
class ExperimentPlan:
    """Population sweep over dimensions and count levels."""

    dims: tuple[int, ...] = (3, 5)
    count_levels: tuple[int, ...] = (100, 1_000, 10_000, 100_000)
    population: int = 100
    iterations: Mapping[int, int] = field(default_factory=lambda: {3: 200, 5: 300})
    base_seed: int = 20260809
    schedule: GainSchedule = DEFAULT_SCHEDULE
    noise: NoiseModel = field(default_factory=NoiseModel)
    preparation: Optional[Mapping[int, PreparationModel]] = None
    workers: int = 1

    def __post_init__(self):
        if self.population < 1:
            raise ValueError("population must be >= 1")
        if not self.dims or not self.count_levels:
            raise ValueError("dims and count_levels must be nonempty")

    def iterations_for(self, d: int) -> int:
        if d in self.iterations:
            return self.iterations[d]
        return 50 * (d + 1)  # matches 200 at d=3 and 300 at d=5

    def preparation_for(self, d: int) -> PreparationModel:
        if self.preparation is not None and d in self.preparation:
            return self.preparation[d]
        return PreparationModel.for_dim(d)

    def run_spec(
        self,
        d: int,
        max_counts: int,
        state_index: int,
        condition: str = "baseline",
        noise: Optional[NoiseModel] = None,
        preparation: Optional[PreparationModel] = None,
    ) -> RunSpec:
        """Build the spec for one run; seeds never depend on the condition name."""
        base = self.base_seed
        return RunSpec(
            dim=d,
            iterations=self.iterations_for(d),
            schedule=self.schedule,
            noise=(noise if noise is not None else self.noise).with_max_counts(max_counts),
            preparation=(
                preparation if preparation is not None else self.preparation_for(d)
            ),
            oracle_kind="mqpg",
            engine_seed=derive_seed(base, d, state_index, _STREAM_ENGINE),
            oracle_seed=derive_seed(base, d, max_counts, state_index, _STREAM_ORACLE),
            prep_seed=derive_seed(base, d, state_index, _STREAM_PREP),
            target_seed=derive_seed(base, d, state_index, _STREAM_TARGET),
            condition=condition,
            state_index=state_index,
        )


@dataclass
class BatchResult:
    trajectories: dict[tuple[int, int], list[Trajectory]]
    failures: list[dict]

    def __len__(self) -> int:
        return sum(len(v) for v in self.trajectories.values())


def _execute_batch(specs: list[RunSpec], workers: int):
    """Run specs in order, catching per-run failures; order-deterministic."""
    results: list[Optional[Trajectory]] = []
    failures: list[dict] = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(execute_run, s) for s in specs]
            for spec, fut in zip(specs, futures):
                try:
                    results.append(fut.result())
                except Exception as exc:
                    failures.append(_failure_entry(spec, exc))
                    results.append(None)
    else:
        for spec in specs:
            try:
                results.append(execute_run(spec))
            except Exception as exc:
                failures.append(_failure_entry(spec, exc))
                results.append(None)
    return results, failures


def _failure_entry(spec: RunSpec, exc: Exception) -> dict:
    return {
        "condition": spec.condition,
        "dim": spec.dim,
        "max_counts": spec.noise.max_counts,
        "state_index": spec.state_index,
        "error": f"{type(exc).__name__}: {exc}",
    }


def run_batch(plan: ExperimentPlan, condition: str = "baseline") -> BatchResult:
    """One trajectory per (dimension, count level, state index).

    Individual run failures are recorded and skipped, never aborting the
    batch.  Infidelity is recorded against the ideal target; the fidelity to
    the actually prepared state is kept in each trajectory's meta block.
    """
    specs = [
        plan.run_spec(d, n, i, condition=condition)
        for d in plan.dims
        for n in plan.count_levels
        for i in range(plan.population)
    ]
    results, failures = _execute_batch(specs, plan.workers)
    grouped: dict[tuple[int, int], list[Trajectory]] = {
        (d, n): [] for d in plan.dims for n in plan.count_levels
    }
    for spec, traj in zip(specs, results):
        if traj is not None:
            grouped[(spec.dim, spec.noise.max_counts)].append(traj)
    return BatchResult(trajectories=grouped, failures=failures)


@dataclass
class SummaryStats:
    """Median and quartile infidelity per iteration over a population."""

    median: np.ndarray
    q25: np.ndarray
    q75: np.ndarray
    population: int

    @property
    def iterations(self) -> int:
        return len(self.median)

    @property
    def final_median(self) -> float:
        return float(self.median[-1])

    @property
    def final_q25(self) -> float:
        return float(self.q25[-1])

    @property
    def final_q75(self) -> float:
        return float(self.q75[-1])


def summarize(trajectories: Iterable[Trajectory]) -> SummaryStats:
    """Per-iteration median and quartiles (linear rank interpolation)."""
    trajs = list(trajectories)
    if not trajs:
        raise ValueError("cannot summarize an empty collection")
    lengths = {len(t.records) for t in trajs}
    if len(lengths) != 1:
        raise ValueError(f"trajectories disagree on iteration count: {sorted(lengths)}")
    data = np.array([t.infidelities for t in trajs])
    if np.isnan(data).any():
        raise ValueError("trajectories lack target infidelities; cannot summarize")
    q25, med, q75 = np.percentile(data, [25, 50, 75], axis=0)
    return SummaryStats(median=med, q25=q25, q75=q75, population=len(trajs))


#: Error-budget conditions: (name, electronic scale, crosstalk scale, prep scale).
BUDGET_CONDITIONS: tuple[tuple[str, float, float, float], ...] = (
    ("baseline", 1.0, 1.0, 1.0),
    ("environmental_removed", 0.0, 1.0, 1.0),
    ("crosstalk_removed", 1.0, 0.0, 1.0),
    ("preparation_removed", 1.0, 1.0, 0.0),
    ("environmental_x10", 10.0, 1.0, 1.0),
    ("crosstalk_x10", 1.0, 10.0, 1.0),
    ("preparation_x3", 1.0, 1.0, 3.0),
)


def default_budget_plan(base_seed: int = 20260809, population: int = 100,
                        workers: int = 1) -> ExperimentPlan:
    """The reference error-budget layout: d=5 at N in {1e3, 1e4}."""
    return ExperimentPlan(
        dims=(5,),
        count_levels=(1_000, 10_000),
        population=population,
        base_seed=base_seed,
        workers=workers,
    )


@dataclass
class BudgetResult:
    #: condition name -> (dim, max_counts) -> SummaryStats
    summaries: dict[str, dict[tuple[int, int], SummaryStats]]
    failures: list[dict]


def run_error_budget(plan: ExperimentPlan) -> BudgetResult:
    """Rerun the same population with each error source removed or amplified.

    Seeds exclude the condition name, so the target states (and every other
    random draw whose distribution is unchanged) are paired across
    conditions, and a toggle that changes nothing reproduces the baseline
    bit for bit.
    """
    summaries: dict[str, dict[tuple[int, int], SummaryStats]] = {}
    failures: list[dict] = []
    for name, e_scale, c_scale, p_scale in BUDGET_CONDITIONS:
        noise = plan.noise.scaled_electronic(e_scale).scaled_crosstalk(c_scale)
        specs = []
        for d in plan.dims:
            prep = plan.preparation_for(d).scaled(p_scale)
            for n in plan.count_levels:
                for i in range(plan.population):
                    specs.append(
                        plan.run_spec(
                            d, n, i, condition=name, noise=noise, preparation=prep
                        )
                    )
        results, fails = _execute_batch(specs, plan.workers)
        failures.extend(fails)
        grouped: dict[tuple[int, int], list[Trajectory]] = {}
        for spec, traj in zip(specs, results):
            if traj is not None:
                grouped.setdefault((spec.dim, spec.noise.max_counts), []).append(traj)
        summaries[name] = {cell: summarize(ts) for cell, ts in grouped.items()}
    return BudgetResult(summaries=summaries, failures=failures)


@dataclass
class ComparisonRow:
    method: str
    dim: int
    max_counts: int
    median_fidelity: float
    q25_fidelity: float
    q75_fidelity: float


def _mlst_fidelities(plan: ExperimentPlan, d: int, max_counts: int) -> tuple[list[float], list[dict]]:
    pset = build_projector_set(d)
    noise = plan.noise.with_max_counts(max_counts)
    prep = plan.preparation_for(d)
    fids: list[float] = []
    failures: list[dict] = []
    for i in range(plan.population):
        target = haar_random_state(
            d, np.random.default_rng(derive_seed(plan.base_seed, d, i, _STREAM_TARGET))
        )
        prepared = prepare_imperfect_state(
            target, prep, np.random.default_rng(derive_seed(plan.base_seed, d, i, _STREAM_PREP))
        )
        rng = np.random.default_rng(
            derive_seed(plan.base_seed, d, max_counts, i, _STREAM_TOMOGRAM)
        )
        try:
            counts = acquire_tomogram(pset, prepared, noise, rng)
            rho = mle_reconstruct(pset, counts)
            fids.append(fidelity_to_pure(rho, target))
        except SgtError as exc:
            failures.append(
                {
                    "condition": "mlst",
                    "dim": d,
                    "max_counts": max_counts,
                    "state_index": i,
                    "error": f"{type(exc).__name__}: {exc}",
                }
            )
    return fids, failures


@dataclass
class ComparisonResult:
    rows: list[ComparisonRow]
    failures: list[dict]


def compare_sgt_mlst(plan: ExperimentPlan) -> ComparisonResult:
    """Final-fidelity table: both methods on the same targets and noise.

    The MLST side measures the same prepared states through a single channel
    of the same noisy device, one count per projector, and reports fidelity
    of the reconstruction to the ideal target, like the SGT side.
    """
    batch = run_batch(plan, condition="sgt")
    rows: list[ComparisonRow] = []
    failures = list(batch.failures)
    for d in plan.dims:
        for n in plan.count_levels:
            trajs = batch.trajectories[(d, n)]
            sgt_fids = [t.meta["final_fidelity_ideal"] for t in trajs]
            if sgt_fids:
                q25, med, q75 = np.percentile(sgt_fids, [25, 50, 75])
                rows.append(ComparisonRow("sgt", d, n, float(med), float(q25), float(q75)))
            mlst_fids, mlst_fails = _mlst_fidelities(plan, d, n)
            failures.extend(mlst_fails)
            if mlst_fids:
                q25, med, q75 = np.percentile(mlst_fids, [25, 50, 75])
                rows.append(ComparisonRow("mlst", d, n, float(med), float(q25), float(q75)))
    return ComparisonResult(rows=rows, failures=failures)
