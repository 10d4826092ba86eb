"""Single-channel maximum-likelihood tomography baseline.

Reconstructs a density matrix from sequential single-channel counts on an
informationally complete set of d^2 projector states: the basis states plus
all pairwise real and imaginary superpositions.

The reconstruction is the iterative R*rho*R fixed-point ascent.  Because the
measured rank-1 operators do not sum to the identity, the iteration runs in
the transformed frame sigma = S^(1/2) rho S^(1/2) / tr(...), where
S = sum_j |pi_j><pi_j|; in that frame the transformed effects form a POVM,
the true state is an exact fixed point of the update, and the multinomial
log-likelihood (equivalently, the scale-profiled independent-Poisson
likelihood) is monitored at every step.  If a full step would decrease it, a
diluted step (I + eps*R) sigma (I + eps*R) with halved eps is used instead,
which restores monotonicity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatchError, InvalidDimensionError, NoSignalError
from .measurement import NoiseModel, apply_crosstalk, projection_probability, sample_channel_counts
from .states import QuditState, basis_state

HERMITICITY_TOL = 1e-10
PSD_TOL = -1e-10
TRACE_TOL = 1e-10


class ProjectorSet:
    """Measurement states for sequential single-channel tomography.

    Verifies informational completeness at construction: the rank-1
    operators |pi_j><pi_j| must span the full d^2-dimensional operator
    space (numerical rank of the stacked, vectorized operators).
    """

    def __init__(self, states: list[QuditState]):
        if not states:
            raise InvalidDimensionError("projector set cannot be empty")
        d = states[0].dim
        if any(s.dim != d for s in states):
            raise DimensionMismatchError("all projector states must share one dimension")
        self.states = tuple(states)
        self.matrix = np.array([s.amplitudes for s in states])  # (m, d)
        design = np.array(
            [np.outer(s.amplitudes, s.amplitudes.conj()).ravel() for s in states]
        )
        if np.linalg.matrix_rank(design, tol=1e-10) < d * d:
            raise ValueError(
                "projector set is not informationally complete for this dimension"
            )

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def __len__(self) -> int:
        return self.matrix.shape[0]


def build_projector_set(d: int) -> ProjectorSet:
    """The standard d^2 set: basis states plus (|j>+|k>)/sqrt2 and (|j>+i|k>)/sqrt2."""
    if d < 2:
        raise InvalidDimensionError("tomography needs dim >= 2")
    states = [basis_state(d, j) for j in range(d)]
    eye = np.eye(d, dtype=np.complex128)
    for j in range(d):
        for k in range(j + 1, d):
            states.append(QuditState(eye[j] + eye[k]))
            states.append(QuditState(eye[j] + 1j * eye[k]))
    return ProjectorSet(states)


def acquire_tomogram(
    pset: ProjectorSet,
    prepared: QuditState,
    noise: NoiseModel,
    rng: np.random.Generator,
) -> np.ndarray:
    """One single-channel count per projector, under the full noise model."""
    if pset.dim != prepared.dim:
        raise DimensionMismatchError("projector set does not match the input dimension")
    counts = np.empty(len(pset), dtype=np.int64)
    for j, proj in enumerate(pset.states):
        p = apply_crosstalk(projection_probability(proj, prepared), noise.crosstalk)
        counts[j] = sample_channel_counts(p, noise, rng)
    return counts


def log_likelihood(pset: ProjectorSet, counts: np.ndarray, rho: np.ndarray) -> float:
    """Multinomial log-likelihood of the counts under normalized probabilities.

    Identical (up to a counts-only constant) to the independent-Poisson
    likelihood with the overall flux profiled out.
    """
    probs = np.einsum("ji,ik,jk->j", pset.matrix.conj(), rho, pset.matrix).real
    probs = np.maximum(probs, 1e-300)
    q = probs / probs.sum()
    return float(np.sum(np.asarray(counts, dtype=float) * np.log(q)))


@dataclass
class MleInfo:
    iterations: int
    converged: bool
    dilutions: int
    log_likelihoods: list[float]


def mle_reconstruct(
    pset: ProjectorSet,
    counts: np.ndarray,
    max_iter: int = 5000,
    tol: float = 1e-8,
    return_info: bool = False,
):
    """Density matrix maximizing the likelihood of the tomogram.

    Starts from the maximally mixed state and stops when the max-abs change
    of the density matrix falls below tol or max_iter is reached.  The
    returned matrix is Hermitian, positive semidefinite and unit trace
    within tight tolerances by construction.
    """
    counts = np.asarray(counts, dtype=float)
    if counts.shape != (len(pset),):
        raise ValueError(f"expected {len(pset)} counts, got shape {counts.shape}")
    if np.any(counts < 0):
        raise ValueError("counts must be nonnegative")
    total = counts.sum()
    if total == 0:
        raise NoSignalError("all counts are zero; nothing to reconstruct")
    freqs = counts / total

    d = pset.dim
    # Frame transform: B = S^(-1/2) turns the projectors into a POVM.
    overlap_sum = pset.matrix.T @ pset.matrix.conj()  # S = sum |pi><pi|
    w, v = np.linalg.eigh(overlap_sum)
    b = (v * (w**-0.5)) @ v.conj().T
    bp = pset.matrix @ b.T  # row j = B |pi_j>

    def to_rho(sig: np.ndarray) -> np.ndarray:
        r = b @ sig @ b
        r = (r + r.conj().T) / 2.0
        return r / np.trace(r).real

    def frame_ll(sig: np.ndarray) -> float:
        q = np.einsum("ji,ik,jk->j", bp.conj(), sig, bp).real
        q = np.maximum(q, 1e-300)
        # q sums to tr(sigma) == 1, so these are the normalized probabilities
        return float(np.sum(counts * np.log(q)))

    sigma = np.eye(d, dtype=np.complex128) / d
    rho = to_rho(sigma)
    ll = frame_ll(sigma)
    lls = [ll]
    iterations = 0
    converged = False
    dilutions = 0
    for iterations in range(1, max_iter + 1):
        q = np.einsum("ji,ik,jk->j", bp.conj(), sigma, bp).real
        q = np.maximum(q, 1e-300)
        r_op = (bp.T * (freqs / q)) @ bp.conj()
        candidate = r_op @ sigma @ r_op
        candidate = (candidate + candidate.conj().T) / 2.0
        candidate /= np.trace(candidate).real
        new_ll = frame_ll(candidate)
        if new_ll < ll - 1e-9:
            # Full step overshot: dilute toward the identity direction.
            dilutions += 1
            eps = 1.0
            eye = np.eye(d)
            while eps > 1e-12:
                eps /= 2.0
                mixer = eye + eps * r_op
                candidate = mixer @ sigma @ mixer.conj().T
                candidate = (candidate + candidate.conj().T) / 2.0
                candidate /= np.trace(candidate).real
                new_ll = frame_ll(candidate)
                if new_ll >= ll - 1e-9:
                    break
            else:
                converged = True  # flat to machine precision
                break
        sigma = candidate
        ll = new_ll
        lls.append(ll)
        new_rho = to_rho(sigma)
        if np.max(np.abs(new_rho - rho)) < tol:
            rho = new_rho
            converged = True
            break
        rho = new_rho
    if return_info:
        return rho, MleInfo(
            iterations=iterations,
            converged=converged,
            dilutions=dilutions,
            log_likelihoods=lls,
        )
    return rho


def validate_density_matrix(rho: np.ndarray) -> None:
    """Raise if rho is not Hermitian, positive semidefinite, unit trace."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > HERMITICITY_TOL:
        raise ValueError("density matrix is not Hermitian within 1e-10")
    if abs(np.trace(rho).real - 1.0) > TRACE_TOL:
        raise ValueError("density matrix trace differs from 1 by more than 1e-10")
    if np.linalg.eigvalsh((rho + rho.conj().T) / 2.0).min() < PSD_TOL:
        raise ValueError("density matrix has an eigenvalue below -1e-10")


def fidelity_to_pure(rho: np.ndarray, psi: QuditState) -> float:
    """<psi|rho|psi> for a validated density matrix."""
    rho = np.asarray(rho)
    validate_density_matrix(rho)
    if rho.shape[0] != psi.dim:
        raise DimensionMismatchError("density matrix dimension must match the state")
    value = complex(psi.amplitudes.conj() @ rho @ psi.amplitudes)
    if abs(value.imag) > 1e-10:
        raise ValueError("fidelity came out non-real; density matrix is unphysical")
    return float(np.clip(value.real, 0.0, 1.0))
