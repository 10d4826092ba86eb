"""Pure qudit states as unit-norm complex vectors, plus the perturbation algebra.

A state lives in the span of the first ``d`` basis modes and is stored as a
read-only complex array of probability amplitudes.  All constructors normalize,
so every :class:`QuditState` in the program satisfies ``sum |c_j|^2 == 1`` to
within 1e-12.  Global phase is never fixed; comparisons go through
:func:`fidelity`, which is phase invariant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import (
    DegenerateStateError,
    DimensionMismatchError,
    InvalidDimensionError,
)

NORM_TOL = 1e-12

#: The four allowed entries of a perturbation direction.
DIRECTION_VALUES = np.array([1.0, -1.0, 1.0j, -1.0j], dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class QuditState:
    """Unit-norm vector of complex amplitudes in the mode basis.

    The input vector is normalized on construction; a vector with norm below
    1e-12 is rejected.  The amplitude array is made read-only, so instances
    are immutable values and safe to share across threads.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.size == 0:
            raise InvalidDimensionError(
                f"state requires a nonempty 1-d amplitude vector, got shape {amps.shape}"
            )
        norm = np.linalg.norm(amps)
        if norm < NORM_TOL:
            raise DegenerateStateError("cannot normalize a vector with norm < 1e-12")
        amps = amps / norm
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def overlap(self, other: "QuditState") -> complex:
        """Inner product <self|other>."""
        if self.dim != other.dim:
            raise DimensionMismatchError(f"dim {self.dim} != dim {other.dim}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __eq__(self, other) -> bool:
        """Bit-exact amplitude equality (used by determinism checks)."""
        if not isinstance(other, QuditState):
            return NotImplemented
        return self.dim == other.dim and bool(
            np.array_equal(self.amplitudes, other.amplitudes)
        )

    def __repr__(self) -> str:
        return f"QuditState(dim={self.dim}, amplitudes={self.amplitudes!r})"


def basis_state(d: int, j: int) -> QuditState:
    """The computational basis state with a single unit amplitude at index j."""
    if d < 1:
        raise InvalidDimensionError("dimension must be >= 1")
    if not 0 <= j < d:
        raise InvalidDimensionError(f"basis index {j} outside [0, {d})")
    amps = np.zeros(d, dtype=np.complex128)
    amps[j] = 1.0
    return QuditState(amps)


def haar_random_state(d: int, rng: np.random.Generator) -> QuditState:
    """Draw a Haar-uniform pure state on the d-dimensional complex sphere.

    Normalizing a vector of i.i.d. standard complex Gaussians has the same
    law as one column of a Haar-random unitary, which is all the uniformity
    we need here.
    """
    if d < 1:
        raise InvalidDimensionError("dimension must be >= 1")
    vec = rng.normal(size=d) + 1j * rng.normal(size=d)
    return QuditState(vec)


def fidelity(psi: QuditState, phi: QuditState) -> float:
    """|<psi|phi>|^2, clipped into [0, 1] against roundoff."""
    ov = psi.overlap(phi)
    return float(min(1.0, abs(ov) ** 2))


def infidelity(psi: QuditState, phi: QuditState) -> float:
    return 1.0 - fidelity(psi, phi)


def sample_direction(d: int, rng: np.random.Generator) -> np.ndarray:
    """Random perturbation direction: each entry uniform over {1, -1, i, -i}."""
    if d < 1:
        raise InvalidDimensionError("dimension must be >= 1")
    return DIRECTION_VALUES[rng.integers(0, 4, size=d)]


def is_valid_direction(delta: np.ndarray) -> bool:
    """Check every entry is exactly one of the four allowed unit values."""
    delta = np.asarray(delta)
    return bool(np.all(np.isin(delta, DIRECTION_VALUES)))


def perturb_pair(
    psi: QuditState, delta: np.ndarray, beta: float
) -> tuple[QuditState, QuditState]:
    """Normalized states psi +- beta*delta used as the two projector settings.

    beta must be nonnegative; beta == 0 returns (psi, psi).  A perturbation
    that cancels the state to norm < 1e-12 raises DegenerateStateError.
    """
    delta = np.asarray(delta, dtype=np.complex128)
    if delta.shape != (psi.dim,):
        raise DimensionMismatchError(
            f"direction shape {delta.shape} incompatible with dim {psi.dim}"
        )
    if beta < 0:
        raise ValueError("perturbation strength must be nonnegative")
    step = beta * delta
    return QuditState(psi.amplitudes + step), QuditState(psi.amplitudes - step)
