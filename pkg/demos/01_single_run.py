"""One self-guided tomography run, step by step.

A random 3-dimensional target state is prepared imperfectly, measured through
the noisy two-channel simulator, and estimated over 200 iterations.  Prints a
few milestones and saves the convergence curve.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from sgtsim import (
    MqpgOracle,
    NoiseModel,
    PreparationModel,
    SgtConfig,
    haar_random_state,
    infidelity,
    prepare_imperfect_state,
    run_sgt,
)

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

rng = np.random.default_rng(7)
target = haar_random_state(3, rng)
prepared = prepare_imperfect_state(target, PreparationModel.for_dim(3), rng)
print(f"target dim 3; preparation infidelity {infidelity(prepared, target):.4f}")

noise = NoiseModel(max_counts=10_000)
oracle = MqpgOracle(prepared, noise, np.random.default_rng(8))
config = SgtConfig(dim=3, iterations=200, seed=9)
trajectory = run_sgt(config, oracle, target=target)

for k in (0, 4, 9, 19, 49, 99, 199):
    r = trajectory.records[k]
    print(
        f"iteration {k + 1:>3}: counts ({r.counts_plus:>6}, {r.counts_minus:>6}), "
        f"infidelity {r.infidelity_vs_target:.2e}"
    )

fig, ax = plt.subplots(figsize=(6, 4))
ax.semilogy(range(1, 201), trajectory.infidelities)
ax.set_xlabel("iteration")
ax.set_ylabel("infidelity to target")
ax.grid(True, which="both", alpha=0.3)
fig.tight_layout()
fig.savefig(out / "single_run.svg")
print(f"saved {out / 'single_run.svg'}")
