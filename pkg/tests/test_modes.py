import numpy as np
import pytest

from sgtsim import QuditState, basis_state, hermite_gaussian, render_spectral_amplitude


def test_order_zero_is_gaussian_peaked_at_zero():
    grid = np.linspace(-5, 5, 401)
    profile = render_spectral_amplitude(basis_state(3, 0), grid, mode_width=1.0)
    assert np.argmax(np.abs(profile)) == np.argmin(np.abs(grid))
    # monotone decay away from the peak on each side
    mags = np.abs(profile)
    mid = len(grid) // 2
    assert np.all(np.diff(mags[mid:]) <= 1e-12)


def test_order_one_crosses_zero_at_origin():
    grid = np.linspace(-5, 5, 401)  # includes x = 0 exactly
    profile = render_spectral_amplitude(basis_state(3, 1), grid, mode_width=1.0)
    assert abs(profile[len(grid) // 2]) < 1e-12
    # odd parity
    assert np.allclose(profile, -profile[::-1], atol=1e-12)


def test_hermite_gaussian_orthonormality_by_quadrature():
    # Independent oracle: Riemann sum of phi_m phi_n over a wide grid.
    u = np.linspace(-12, 12, 4001)
    du = u[1] - u[0]
    for m in range(6):
        for n in range(m, 6):
            integral = np.sum(hermite_gaussian(m, u) * hermite_gaussian(n, u)) * du
            assert integral == pytest.approx(1.0 if m == n else 0.0, abs=1e-8)


@pytest.mark.parametrize("mode_width", [0.5, 1.0, 2.5])
def test_discrete_norm_on_wide_grid(mode_width):
    # Grid spanning +-6 mode widths: sum |f|^2 dx == 1 +- 0.01.
    rng = np.random.default_rng(40)
    grid = np.linspace(-6 * mode_width, 6 * mode_width, 1201)
    dx = grid[1] - grid[0]
    for _ in range(5):
        amps = rng.normal(size=5) + 1j * rng.normal(size=5)
        state = QuditState(amps)
        profile = render_spectral_amplitude(state, grid, mode_width)
        assert np.sum(np.abs(profile) ** 2) * dx == pytest.approx(1.0, abs=0.01)


def test_input_validation():
    state = basis_state(2, 0)
    with pytest.raises(ValueError):
        render_spectral_amplitude(state, np.array([]), 1.0)
    with pytest.raises(ValueError):
        render_spectral_amplitude(state, np.array([0.0]), 0.0)
