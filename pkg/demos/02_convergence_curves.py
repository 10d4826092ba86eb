"""Convergence curves across count levels, with quartile bands.

Runs a population of Haar-random input states at each maximum-count level and
plots median infidelity per iteration with the 25th-75th percentile band.
Population is kept small here so the script finishes in seconds; raise it to
100 to reproduce the full desk-scale statistics.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

from sgtsim import ExperimentPlan, run_batch, summarize
from sgtsim.plotting import plot_convergence, write_plot_data_csv

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

DIM = 3
plan = ExperimentPlan(
    dims=(DIM,),
    count_levels=(100, 1_000, 10_000, 100_000),
    population=25,
    base_seed=20260809,
)

batch = run_batch(plan)
series = []
for n in plan.count_levels:
    stats = summarize(batch.trajectories[(DIM, n)])
    series.append((f"N=1e{len(str(n)) - 1}", stats))
    print(
        f"N={n:>6}: final median infidelity {stats.final_median:.3e} "
        f"[{stats.final_q25:.3e}, {stats.final_q75:.3e}]"
    )

fig_path = out / f"convergence_d{DIM}.svg"
plot_convergence(series, fig_path, title=f"d={DIM}, {plan.population} states")
write_plot_data_csv(series, out / f"convergence_d{DIM}_data.csv")
print(f"saved {fig_path}")
