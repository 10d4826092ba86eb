"""Figure emission for convergence curves with quartile bands."""

from __future__ import annotations

import csv
from pathlib import Path

from .experiments import SummaryStats


def _check_series(series: list[tuple[str, SummaryStats]]) -> int:
    if not series:
        raise ValueError("no summary series given")
    lengths = {s.iterations for _, s in series}
    if len(lengths) != 1:
        raise ValueError(f"series disagree on iteration count: {sorted(lengths)}")
    return lengths.pop()


def write_plot_data_csv(series: list[tuple[str, SummaryStats]], path) -> None:
    """The exact numbers behind the figure, one column group per series."""
    iterations = _check_series(series)
    header = ["iteration"]
    for label, _ in series:
        header += [f"{label}_median", f"{label}_q25", f"{label}_q75"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for k in range(iterations):
            row = [k]
            for _, s in series:
                row += [repr(float(s.median[k])), repr(float(s.q25[k])), repr(float(s.q75[k]))]
            writer.writerow(row)


def plot_convergence(series: list[tuple[str, SummaryStats]], path,
                     title: str | None = None) -> Path:
    """Median infidelity vs iteration, log scale, shaded quartile bands."""
    import matplotlib.pyplot as plt

    _check_series(series)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label, s in series:
        x = range(1, s.iterations + 1)
        (line,) = ax.plot(x, s.median, label=label)
        ax.fill_between(x, s.q25, s.q75, alpha=0.25, color=line.get_color(), linewidth=0)
    ax.set_yscale("log")
    ax.set_xlabel("iteration")
    ax.set_ylabel("infidelity")
    if title:
        ax.set_title(title)
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path)
    plt.close(fig)
    return path
