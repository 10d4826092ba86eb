import numpy as np
import pytest

from sgtsim import (
    NoSignalError,
    NoiseModel,
    PreparationModel,
    acquire_tomogram,
    basis_state,
    build_projector_set,
    fidelity_to_pure,
    haar_random_state,
    log_likelihood,
    mle_reconstruct,
    prepare_imperfect_state,
    validate_density_matrix,
)

SILENT = NoiseModel(electronic_enabled=False, shot_noise_enabled=False, crosstalk=0.0)
QUIET = NoiseModel(electronic_enabled=False, crosstalk=0.0)


def _exact_counts(pset, psi, n):
    probs = np.abs(pset.matrix.conj() @ psi.amplitudes) ** 2
    return np.round(n * probs).astype(np.int64)


@pytest.mark.parametrize("d,count", [(3, 9), (5, 25)])
def test_projector_count(d, count):
    assert len(build_projector_set(d)) == count


@pytest.mark.parametrize("d", [2, 3, 5])
def test_projector_set_spans_operator_space(d):
    pset = build_projector_set(d)
    design = np.array(
        [np.outer(s.amplitudes, s.amplitudes.conj()).ravel() for s in pset.states]
    )
    assert np.linalg.matrix_rank(design, tol=1e-10) == d * d


def test_incomplete_set_rejected():
    from sgtsim.mle import ProjectorSet

    with pytest.raises(ValueError):
        ProjectorSet([basis_state(3, j) for j in range(3)])


def test_tomogram_orthogonality_and_length():
    pset = build_projector_set(3)
    counts = acquire_tomogram(
        pset, basis_state(3, 0), SILENT.with_max_counts(10_000), np.random.default_rng(1)
    )
    assert len(counts) == 9
    assert counts[0] == 10_000  # projector |0>
    assert counts[1] == 0 and counts[2] == 0  # orthogonal basis projectors


def test_tomogram_superposition_counts():
    pset = build_projector_set(3)
    rng = np.random.default_rng(2)
    totals = []
    for _ in range(50):
        counts = acquire_tomogram(
            pset, basis_state(3, 0), QUIET.with_max_counts(10_000), rng
        )
        totals.append(counts[3])  # (|0> + |1>)/sqrt(2), first pair projector
    assert np.mean(totals) == pytest.approx(5000, abs=150)


@pytest.mark.parametrize("d", [3, 5])
def test_reconstruction_from_exact_pure_counts(d):
    pset = build_projector_set(d)
    for i in range(5):
        psi = haar_random_state(d, np.random.default_rng([3, d, i]))
        rho = mle_reconstruct(pset, _exact_counts(pset, psi, 10**6))
        assert fidelity_to_pure(rho, psi) > 0.999


def test_equal_counts_give_maximally_mixed():
    pset = build_projector_set(2)
    rho = mle_reconstruct(pset, np.full(4, 1000))
    assert np.max(np.abs(rho - np.eye(2) / 2)) < 1e-3


def test_all_zero_counts_rejected():
    pset = build_projector_set(3)
    with pytest.raises(NoSignalError):
        mle_reconstruct(pset, np.zeros(9, dtype=int))


def test_fuzzed_tomograms_monotone_likelihood_and_physicality():
    rng = np.random.default_rng(7)
    pset3 = build_projector_set(3)
    noise = NoiseModel(max_counts=1000)
    prep = PreparationModel.for_dim(3)
    for _ in range(100):
        target = haar_random_state(3, rng)
        prepared = prepare_imperfect_state(target, prep, rng)
        counts = acquire_tomogram(pset3, prepared, noise, rng)
        rho, info = mle_reconstruct(pset3, counts, return_info=True)
        validate_density_matrix(rho)
        lls = info.log_likelihoods
        assert all(b >= a - 1e-9 for a, b in zip(lls, lls[1:]))
        assert abs(np.trace(rho).real - 1.0) < 1e-10


def test_log_likelihood_prefers_truth():
    pset = build_projector_set(3)
    psi = haar_random_state(3, np.random.default_rng(11))
    counts = _exact_counts(pset, psi, 10**6)
    rho_true = np.outer(psi.amplitudes, psi.amplitudes.conj())
    rho_mixed = np.eye(3) / 3
    assert log_likelihood(pset, counts, rho_true) > log_likelihood(pset, counts, rho_mixed)


def test_fidelity_to_pure_examples():
    psi = haar_random_state(3, np.random.default_rng(13))
    rho_pure = np.outer(psi.amplitudes, psi.amplitudes.conj())
    assert fidelity_to_pure(rho_pure, psi) == pytest.approx(1.0, abs=1e-10)
    assert fidelity_to_pure(np.eye(3) / 3, psi) == pytest.approx(1 / 3, abs=1e-10)
    raw = haar_random_state(3, np.random.default_rng(14)).amplitudes
    chi = raw - np.vdot(psi.amplitudes, raw) * psi.amplitudes
    chi /= np.linalg.norm(chi)
    rho_orth = np.outer(chi, chi.conj())
    assert fidelity_to_pure(rho_orth, psi) == pytest.approx(0.0, abs=1e-10)


def test_unphysical_density_matrices_rejected():
    psi = basis_state(2, 0)
    with pytest.raises(ValueError):
        fidelity_to_pure(np.array([[0.5, 0.3], [0.2, 0.5]]), psi)  # not Hermitian
    with pytest.raises(ValueError):
        fidelity_to_pure(np.diag([0.8, 0.8]), psi)  # trace != 1
    with pytest.raises(ValueError):
        fidelity_to_pure(np.diag([1.2, -0.2]), psi)  # negative eigenvalue
