"""Rendering states as complex spectral amplitudes.

The computational basis is the family of Hermite-Gaussian mode profiles; any
qudit state is a complex superposition of them.  Useful for eyeballing what
an estimate "looks like" in the frequency domain.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from sgtsim import basis_state, haar_random_state, render_spectral_amplitude

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

grid = np.linspace(-6, 6, 601)

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4))
for j in range(4):
    profile = render_spectral_amplitude(basis_state(4, j), grid, mode_width=1.0)
    ax1.plot(grid, profile.real, label=f"mode {j}")
ax1.set_title("basis mode profiles")
ax1.set_xlabel("frequency offset (mode widths)")
ax1.legend()
ax1.grid(alpha=0.3)

state = haar_random_state(5, np.random.default_rng(42))
profile = render_spectral_amplitude(state, grid, mode_width=1.0)
ax2.plot(grid, np.abs(profile) ** 2, label="|amplitude|^2")
ax2.plot(grid, np.angle(profile), alpha=0.5, label="phase")
ax2.set_title("random 5-mode superposition")
ax2.set_xlabel("frequency offset (mode widths)")
ax2.legend()
ax2.grid(alpha=0.3)

norm = np.sum(np.abs(profile) ** 2) * (grid[1] - grid[0])
print(f"discrete norm of the rendered profile: {norm:.4f}")

fig.tight_layout()
fig.savefig(out / "spectral_modes.svg")
print(f"saved {out / 'spectral_modes.svg'}")
