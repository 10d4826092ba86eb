"""Hermite-Gaussian mode profiles for rendering states as spectral amplitudes.

Only used for plot output; the tomography itself never touches mode shapes.
"""

from __future__ import annotations

import numpy as np

from .states import QuditState


def hermite_gaussian(n: int, u: np.ndarray) -> np.ndarray:
    """Orthonormal Hermite-Gaussian function of order n on the real line.

    Physicists' Hermite polynomials with weight exp(-u^2/2), scaled so that
    the functions are orthonormal under the continuous L2 inner product.
    Evaluated by the stable three-term recurrence on the normalized
    functions themselves (coefficients would overflow past n ~ 20).
    """
    u = np.asarray(u, dtype=float)
    phi_prev = np.pi ** -0.25 * np.exp(-(u**2) / 2.0)
    if n == 0:
        return phi_prev
    phi = np.sqrt(2.0) * u * phi_prev
    for m in range(2, n + 1):
        phi, phi_prev = (
            np.sqrt(2.0 / m) * u * phi - np.sqrt((m - 1) / m) * phi_prev,
            phi,
        )
    return phi


def render_spectral_amplitude(
    state: QuditState, grid: np.ndarray, mode_width: float
) -> np.ndarray:
    """Complex spectral amplitude of a state on a frequency-offset grid.

    Returns sum_j c_j * HG_j(x / mode_width) / sqrt(mode_width), so the
    rendered profile is unit-norm in x whenever the grid covers the support.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("grid must be nonempty")
    if mode_width <= 0:
        raise ValueError("mode_width must be positive")
    u = grid / mode_width
    out = np.zeros_like(grid, dtype=np.complex128)
    for j, c in enumerate(state.amplitudes):
        out += c * hermite_gaussian(j, u)
    return out / np.sqrt(mode_width)
