"""The self-guided tomography loop.

Each iteration perturbs the current estimate in a random complex direction,
asks the measurement oracle for the two channel counts, turns their
pseudo-normalized difference into a gradient estimate, and takes a decaying
step.  The loop is strictly sequential; determinism is guaranteed by the
config seed plus whatever determinism the oracle provides.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .exceptions import (
    DegenerateStateError,
    DimensionMismatchError,
    InvalidGainError,
    OracleError,
)
from .measurement import MeasurementOracle
from .schedule import DEFAULT_SCHEDULE, GainSchedule
from .states import QuditState, haar_random_state, infidelity, perturb_pair, sample_direction


@dataclass(frozen=True)
class SgtConfig:
    """Everything one run needs besides the oracle."""

    dim: int
    iterations: int
    schedule: GainSchedule = DEFAULT_SCHEDULE
    seed: int = 0
    initial_guess: Optional[QuditState] = None

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("tomography needs dim >= 2")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.initial_guess is not None and self.initial_guess.dim != self.dim:
            raise DimensionMismatchError("initial_guess dimension must equal dim")


@dataclass
class IterationRecord:
    """Everything measured and computed in one iteration.

    The estimate is the state after applying this iteration's update.
    zero_signal marks the no-information convention delta_n == 0 when both
    channels returned zero counts; degenerate marks an update whose result
    could not be normalized (the previous estimate was kept).
    """

    k: int
    direction: np.ndarray
    beta: float
    alpha: float
    counts_plus: int
    counts_minus: int
    delta_n: float
    estimate: QuditState
    infidelity_vs_target: Optional[float] = None
    zero_signal: bool = False
    degenerate: bool = False


@dataclass
class Trajectory:
    config: SgtConfig
    records: list[IterationRecord]
    final_estimate: QuditState
    target: Optional[QuditState] = None
    meta: dict = field(default_factory=dict)

    @property
    def infidelities(self) -> np.ndarray:
        """Per-iteration infidelity versus the ideal target (NaN if unknown)."""
        return np.array(
            [
                r.infidelity_vs_target if r.infidelity_vs_target is not None else np.nan
                for r in self.records
            ]
        )


def pseudo_normalized_difference(n_plus: int, n_minus: int) -> float:
    """(N+ - N-) / (N+ + N-), with 0 when both channels are silent."""
    if n_plus < 0 or n_minus < 0:
        raise ValueError("counts must be nonnegative")
    total = n_plus + n_minus
    if total == 0:
        return 0.0
    return (n_plus - n_minus) / total


def gradient(delta_n: float, direction: np.ndarray, beta: float) -> np.ndarray:
    """Gradient estimate delta_n * direction / (2 beta)."""
    if beta <= 0:
        raise InvalidGainError("gradient requires beta > 0")
    return (delta_n / (2.0 * beta)) * np.asarray(direction, dtype=np.complex128)


def update_estimate(psi: QuditState, alpha: float, g: np.ndarray) -> QuditState:
    """Normalized psi + alpha * g; raises DegenerateStateError on cancellation."""
    if alpha <= 0:
        raise InvalidGainError("update requires alpha > 0")
    g = np.asarray(g, dtype=np.complex128)
    if g.shape != (psi.dim,):
        raise DimensionMismatchError(
            f"gradient shape {g.shape} incompatible with dim {psi.dim}"
        )
    return QuditState(psi.amplitudes + alpha * g)


def run_sgt(
    config: SgtConfig,
    oracle: MeasurementOracle,
    target: Optional[QuditState] = None,
) -> Trajectory:
    """Run the full iteration loop and record every step.

    The engine's random stream (initial guess, then one direction per
    iteration) comes from config.seed.  When a target is supplied, each
    record also carries the infidelity of the updated estimate to it; the
    target is never shown to the optimizer.
    """
    if oracle.dim != config.dim:
        raise DimensionMismatchError(
            f"oracle dim {oracle.dim} != config dim {config.dim}"
        )
    if target is not None and target.dim != config.dim:
        raise DimensionMismatchError("target dimension must equal config dim")

    rng = np.random.default_rng(config.seed)
    psi = config.initial_guess
    if psi is None:
        psi = haar_random_state(config.dim, rng)

    schedule = config.schedule
    records: list[IterationRecord] = []
    for k in range(config.iterations):
        alpha = schedule.alpha(k)
        beta = schedule.beta(k)
        delta = sample_direction(config.dim, rng)
        sigma_plus, sigma_minus = perturb_pair(psi, delta, beta)
        try:
            n_plus, n_minus = oracle.measure(sigma_plus, sigma_minus)
        except Exception as exc:
            raise OracleError(k) from exc
        delta_n = pseudo_normalized_difference(n_plus, n_minus)
        g = gradient(delta_n, delta, beta)
        degenerate = False
        try:
            psi = update_estimate(psi, alpha, g)
        except DegenerateStateError:
            degenerate = True  # keep the previous estimate
        records.append(
            IterationRecord(
                k=k,
                direction=delta,
                beta=beta,
                alpha=alpha,
                counts_plus=int(n_plus),
                counts_minus=int(n_minus),
                delta_n=delta_n,
                estimate=psi,
                infidelity_vs_target=(
                    infidelity(psi, target) if target is not None else None
                ),
                zero_signal=(n_plus + n_minus == 0),
                degenerate=degenerate,
            )
        )
    return Trajectory(
        config=config,
        records=records,
        final_estimate=records[-1].estimate,
        target=target,
    )
