"""Simulated two-channel projective measurement with realistic noise.

Models the count statistics of a mode-selective frequency converter read out
by a CCD spectrograph: Poisson shot noise on the upconverted signal, additive
Gaussian electronic read-out noise with a fixed subtraction offset, an
additive-floor cross-talk between orthogonal states, and imperfect input
preparation.

Random-stream contract (relied on by the bit-exact replay tests): within one
channel the Poisson draw happens before the Gaussian draw, and the "+"
channel is sampled before the "-" channel.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Protocol

import numpy as np

from .exceptions import DimensionMismatchError
from .states import QuditState, fidelity, haar_random_state


@dataclass(frozen=True)
class NoiseModel:
    """Parameters of the simulated measurement channel.

    max_counts is the expected number of counts in a channel when input and
    projector overlap perfectly.  The electronic read-out noise defaults
    (mean 890, sigma 14) and the constant subtraction offset (820, i.e. five
    sigma below the mean) leave a residual background of 70 counts per
    channel per measurement, independent of max_counts.

    Setting shot_noise_enabled=False replaces the Poisson draw with its
    rounded mean; electronic_enabled=False removes the read-out noise and
    its subtraction entirely.
    """

    max_counts: int = 10_000
    crosstalk: float = 0.01
    electronic_mean: float = 890.0
    electronic_std: float = 14.0
    subtraction_offset: float = 820.0
    electronic_enabled: bool = True
    shot_noise_enabled: bool = True

    def __post_init__(self):
        if self.max_counts < 1:
            raise ValueError("max_counts must be a positive integer")
        if not 0.0 <= self.crosstalk < 1.0:
            raise ValueError("crosstalk must lie in [0, 1)")
        if self.electronic_std < 0 or self.electronic_mean < 0:
            raise ValueError("electronic noise parameters must be nonnegative")
        if not 0.0 <= self.subtraction_offset <= self.electronic_mean:
            raise ValueError("subtraction_offset must lie in [0, electronic_mean]")

    @property
    def residual_background(self) -> float:
        """Mean counts left per channel after the constant subtraction."""
        if not self.electronic_enabled:
            return 0.0
        return self.electronic_mean - self.subtraction_offset

    def with_max_counts(self, n: int) -> "NoiseModel":
        return replace(self, max_counts=n)

    def scaled_electronic(self, factor: float) -> "NoiseModel":
        """Scale the residual background and its spread by ``factor``.

        The subtraction offset is an instrument setting and stays fixed;
        the noise source above it scales.  factor=0 removes the source.
        """
        if factor < 0:
            raise ValueError("scale factor must be nonnegative")
        return replace(
            self,
            electronic_mean=self.subtraction_offset
            + factor * (self.electronic_mean - self.subtraction_offset),
            electronic_std=factor * self.electronic_std,
        )

    def scaled_crosstalk(self, factor: float) -> "NoiseModel":
        if factor < 0:
            raise ValueError("scale factor must be nonnegative")
        c = min(factor * self.crosstalk, 1.0 - 1e-9)
        return replace(self, crosstalk=c)


@dataclass(frozen=True)
class PreparationModel:
    """Gaussian-distributed infidelity of the physically prepared input."""

    mean_infidelity: float
    infidelity_std: float = 0.001

    def __post_init__(self):
        if not 0.0 <= self.mean_infidelity < 1.0:
            raise ValueError("mean_infidelity must lie in [0, 1)")
        if self.infidelity_std < 0:
            raise ValueError("infidelity_std must be nonnegative")

    @classmethod
    def for_dim(cls, d: int) -> "PreparationModel":
        """Measured preparation quality per dimension: 0.6% at d=3, 0.9% at d=5.

        Other dimensions interpolate the same linear trend, floored at zero.
        """
        return cls(mean_infidelity=max(0.0, 0.006 + 0.0015 * (d - 3)))

    def scaled(self, factor: float) -> "PreparationModel":
        if factor < 0:
            raise ValueError("scale factor must be nonnegative")
        return PreparationModel(
            mean_infidelity=min(factor * self.mean_infidelity, 1.0 - 1e-9),
            infidelity_std=factor * self.infidelity_std,
        )


class MeasurementOracle(Protocol):
    """Anything run_sgt can query for the two channel counts."""

    @property
    def dim(self) -> int: ...

    def measure(
        self, sigma_plus: QuditState, sigma_minus: QuditState
    ) -> tuple[int, int]: ...


def projection_probability(sigma: QuditState, psi: QuditState) -> float:
    """|<sigma|psi>|^2, the ideal click probability of one channel."""
    return fidelity(sigma, psi)


def apply_crosstalk(p: float, c: float) -> float:
    """Additive-floor mixing: an orthogonal input still clicks with probability c."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("probability must lie in [0, 1]")
    if not 0.0 <= c < 1.0:
        raise ValueError("crosstalk must lie in [0, 1)")
    return (1.0 - c) * p + c


def sample_channel_counts(
    p: float, noise: NoiseModel, rng: np.random.Generator
) -> int:
    """One integration period of one output channel.

    raw = Poisson(max_counts * p) + round(Gaussian(mean, std)); the constant
    subtraction_offset is then removed and the result floored at zero.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("probability must lie in [0, 1]")
    lam = noise.max_counts * p
    if noise.shot_noise_enabled:
        raw = int(rng.poisson(lam))
    else:
        raw = int(round(lam))
    if noise.electronic_enabled:
        raw += int(round(rng.normal(noise.electronic_mean, noise.electronic_std)))
        raw -= int(round(noise.subtraction_offset))
    return max(0, raw)


def prepare_imperfect_state(
    target: QuditState, prep: PreparationModel, rng: np.random.Generator
) -> QuditState:
    """Mix the target with a Haar-random orthogonal component.

    The per-state infidelity eps is drawn once from the preparation model
    (clipped into [0, 1)); the returned state has fidelity exactly 1 - eps
    to the target by construction.  Draw order: eps first, then the
    orthogonal direction.
    """
    z = rng.normal()
    eps = float(
        np.clip(prep.mean_infidelity + prep.infidelity_std * z, 0.0, 1.0 - 1e-12)
    )
    if target.dim == 1 or eps == 0.0:
        return target
    tgt = target.amplitudes
    while True:
        raw = haar_random_state(target.dim, rng).amplitudes
        chi = raw - np.vdot(tgt, raw) * tgt
        norm = np.linalg.norm(chi)
        if norm > 1e-12:
            break
    chi = chi / norm
    return QuditState(np.sqrt(1.0 - eps) * tgt + np.sqrt(eps) * chi)


def mqpg_measure(
    sigma_plus: QuditState,
    sigma_minus: QuditState,
    prepared: QuditState,
    noise: NoiseModel,
    rng: np.random.Generator,
) -> tuple[int, int]:
    """Counts observed in the two output channels for one iteration."""
    if sigma_plus.dim != prepared.dim or sigma_minus.dim != prepared.dim:
        raise DimensionMismatchError("projector states must match the input dimension")
    p_plus = apply_crosstalk(projection_probability(sigma_plus, prepared), noise.crosstalk)
    p_minus = apply_crosstalk(projection_probability(sigma_minus, prepared), noise.crosstalk)
    n_plus = sample_channel_counts(p_plus, noise, rng)
    n_minus = sample_channel_counts(p_minus, noise, rng)
    return n_plus, n_minus


class MqpgOracle:
    """Stateful oracle wrapping one prepared input and one noise stream.

    One instance serves one run; concurrent runs need separate instances
    with independent random generators.
    """

    def __init__(
        self, prepared: QuditState, noise: NoiseModel, rng: np.random.Generator
    ):
        self.prepared = prepared
        self.noise = noise
        self.rng = rng

    @property
    def dim(self) -> int:
        return self.prepared.dim

    def measure(
        self, sigma_plus: QuditState, sigma_minus: QuditState
    ) -> tuple[int, int]:
        return mqpg_measure(sigma_plus, sigma_minus, self.prepared, self.noise, self.rng)


class ExactOracle:
    """Deterministic oracle: counts = round(max_counts * p), no sampling.

    Used by property tests and ideal-limit checks.
    """

    def __init__(
        self, prepared: QuditState, max_counts: int = 10**9, crosstalk: float = 0.0
    ):
        self.prepared = prepared
        self.max_counts = max_counts
        self.crosstalk = crosstalk

    @property
    def dim(self) -> int:
        return self.prepared.dim

    def measure(
        self, sigma_plus: QuditState, sigma_minus: QuditState
    ) -> tuple[int, int]:
        if sigma_plus.dim != self.dim or sigma_minus.dim != self.dim:
            raise DimensionMismatchError(
                "projector states must match the input dimension"
            )
        p_plus = apply_crosstalk(
            projection_probability(sigma_plus, self.prepared), self.crosstalk
        )
        p_minus = apply_crosstalk(
            projection_probability(sigma_minus, self.prepared), self.crosstalk
        )
        return round(self.max_counts * p_plus), round(self.max_counts * p_minus)
