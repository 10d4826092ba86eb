"""Command-line front end.

Subcommands: run, replay, batch, summarize, budget, compare, plot.  Every
invocation with the same config and seed produces byte-identical data files;
a manifest.json listing artifacts, their hashes and any per-run failures is
written next to the outputs.  Exit code 0 means every requested run
completed; 1 flags partial failures or a failed replay check; 2 flags
config/usage errors.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from collections import defaultdict
from pathlib import Path

from . import io as sio
from .exceptions import ConfigError, SgtError
from .experiments import (
    BUDGET_CONDITIONS,
    compare_sgt_mlst,
    default_budget_plan,
    execute_run,
    run_batch,
    run_error_budget,
    summarize,
)


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_run(args) -> int:
    spec = sio.load_run_config(args.config, seed_override=args.seed)
    out = _out_dir(args)
    traj = execute_run(spec)
    json_path = out / "trajectory.json"
    csv_path = out / "trajectory.csv"
    sio.write_trajectory_json(traj, json_path)
    sio.write_trajectory_csv(traj, csv_path)
    sio.write_manifest(
        out, "run", sio.sha256_of_file(args.config), [json_path, csv_path], []
    )
    final_inf = traj.records[-1].infidelity_vs_target
    if final_inf is None:
        final_inf = 1.0 - traj.meta["final_fidelity_ideal"]
    print(f"iterations: {len(traj.records)}")
    print(f"final fidelity: {traj.meta['final_fidelity_ideal']!r}")
    print(f"final infidelity: {final_inf!r}")
    print(f"artifacts: {json_path}, {csv_path}")
    return 0


def cmd_replay(args) -> int:
    stored = sio.read_trajectory_json(args.trajectory)
    spec = stored.meta.get("spec")
    if spec is None:
        print("trajectory file carries no run spec; cannot replay", file=sys.stderr)
        return 2
    replayed = execute_run(spec)
    a = sio.trajectory_to_dict(replayed)
    b = json.loads(Path(args.trajectory).read_text())
    match = a == b
    print(f"replay {'matches stored trajectory bit-for-bit' if match else 'MISMATCH'}")
    if args.out is not None:
        out = _out_dir(args)
        path = out / "replayed_trajectory.json"
        sio.write_trajectory_json(replayed, path)
        print(f"artifacts: {path}")
    return 0 if match else 1


def _cell_summaries(batch, out, verbose):
    artifacts = []
    for (d, n), trajs in sorted(batch.trajectories.items()):
        if not trajs:
            continue
        stats = summarize(trajs)
        path = out / f"summary_d{d}_N{n}.csv"
        sio.write_summary_csv(stats, path)
        artifacts.append(path)
        if verbose:
            print(
                f"d={d} N={n}: population {stats.population}, "
                f"final median infidelity {stats.final_median:.3e}"
            )
    return artifacts


def cmd_batch(args) -> int:
    plan = sio.load_plan_config(args.config, seed_override=args.seed)
    if args.workers is not None:
        plan = dataclasses.replace(plan, workers=args.workers)
    out = _out_dir(args)
    batch = run_batch(plan)
    runs_dir = out / "runs"
    runs_dir.mkdir(exist_ok=True)
    artifacts = []
    for (d, n), trajs in sorted(batch.trajectories.items()):
        for traj in trajs:
            i = traj.meta["spec"].state_index
            path = runs_dir / f"trajectory_d{d}_N{n}_i{i:03d}.json"
            sio.write_trajectory_json(traj, path)
            artifacts.append(path)
    artifacts += _cell_summaries(batch, out, verbose=True)
    sio.write_manifest(
        out, "batch", sio.sha256_of_file(args.config), artifacts, batch.failures
    )
    if batch.failures:
        print(f"{len(batch.failures)} run(s) failed; see manifest.json", file=sys.stderr)
        return 1
    return 0


def cmd_summarize(args) -> int:
    paths = []
    for entry in args.runs:
        p = Path(entry)
        if p.is_dir():
            paths.extend(sorted(p.glob("*.json")))
        else:
            paths.append(p)
    paths = [p for p in paths if p.name != "manifest.json"]
    if not paths:
        print("no trajectory files found", file=sys.stderr)
        return 2
    groups = defaultdict(list)
    for p in paths:
        traj = sio.read_trajectory_json(p)
        spec = traj.meta.get("spec")
        key = (spec.dim, spec.noise.max_counts) if spec else (traj.final_estimate.dim, 0)
        groups[key].append(traj)
    out = _out_dir(args)
    artifacts = []
    for (d, n), trajs in sorted(groups.items()):
        stats = summarize(trajs)
        path = out / f"summary_d{d}_N{n}.csv"
        sio.write_summary_csv(stats, path)
        artifacts.append(path)
        print(f"d={d} N={n}: {len(trajs)} runs, final median infidelity "
              f"{stats.final_median:.3e} -> {path}")
    sio.write_manifest(out, "summarize", "", artifacts, [])
    return 0


def cmd_budget(args) -> int:
    if args.config is not None:
        plan = sio.load_plan_config(args.config, seed_override=args.seed)
        config_hash = sio.sha256_of_file(args.config)
    else:
        plan = default_budget_plan(
            base_seed=args.seed if args.seed is not None else 20260809,
            population=args.population,
            workers=args.workers or 1,
        )
        config_hash = ""
    out = _out_dir(args)
    result = run_error_budget(plan)
    artifacts = []
    table_path = out / "budget_table.csv"
    with open(table_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["condition", "dim", "max_counts",
             "final_median_infidelity", "final_q25_infidelity", "final_q75_infidelity"]
        )
        for name, _, _, _ in BUDGET_CONDITIONS:
            cells = result.summaries.get(name, {})
            for (d, n), stats in sorted(cells.items()):
                writer.writerow(
                    [name, d, n, repr(stats.final_median), repr(stats.final_q25),
                     repr(stats.final_q75)]
                )
                path = out / f"budget_{name}_d{d}_N{n}.csv"
                sio.write_summary_csv(stats, path)
                artifacts.append(path)
                print(f"{name:24s} d={d} N={n:>6}: final median infidelity "
                      f"{stats.final_median:.3e} [{stats.final_q25:.3e}, {stats.final_q75:.3e}]")
    artifacts.append(table_path)
    sio.write_manifest(out, "budget", config_hash, artifacts, result.failures)
    if result.failures:
        print(f"{len(result.failures)} run(s) failed; see manifest.json", file=sys.stderr)
        return 1
    return 0


def cmd_compare(args) -> int:
    plan = sio.load_plan_config(args.config, seed_override=args.seed)
    out = _out_dir(args)
    result = compare_sgt_mlst(plan)
    path = out / "comparison.csv"
    sio.write_comparison_csv(result.rows, path)
    by_cell = {(r.method, r.dim, r.max_counts): r for r in result.rows}
    dims = sorted({r.dim for r in result.rows})
    levels = sorted({r.max_counts for r in result.rows}, reverse=True)
    header = "N       " + "".join(f"| d={d} SGT        d={d} MLST       " for d in dims)
    print(header)
    for n in levels:
        line = f"{n:<8}"
        for d in dims:
            for method in ("sgt", "mlst"):
                row = by_cell.get((method, d, n))
                if row is None:
                    line += "|     --        "
                    continue
                up = 100 * (row.q75_fidelity - row.median_fidelity)
                dn = 100 * (row.median_fidelity - row.q25_fidelity)
                line += f"| {100 * row.median_fidelity:5.2f}% +{up:.2f}/-{dn:.2f} "
        print(line)
    sio.write_manifest(
        out, "compare", sio.sha256_of_file(args.config), [path], result.failures
    )
    print(f"artifacts: {path}")
    if result.failures:
        print(f"{len(result.failures)} run(s) failed; see manifest.json", file=sys.stderr)
        return 1
    return 0


def cmd_plot(args) -> int:
    import matplotlib

    matplotlib.use("Agg")
    from .plotting import plot_convergence, write_plot_data_csv

    labels = args.labels or [Path(p).stem for p in args.summaries]
    if len(labels) != len(args.summaries):
        print("number of labels must match number of summary files", file=sys.stderr)
        return 2
    series = []
    for label, path in zip(labels, args.summaries):
        series.append((label, sio.read_summary_csv(path)))
    out = _out_dir(args)
    fig_path = out / f"{args.name}.svg"
    data_path = out / f"{args.name}_data.csv"
    try:
        plot_convergence(series, fig_path, title=args.title)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    write_plot_data_csv(series, data_path)
    sio.write_manifest(out, "plot", "", [fig_path, data_path], [])
    print(f"artifacts: {fig_path}, {data_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sgtsim",
        description="Self-guided tomography simulation: single runs, batches, "
        "error budgets, method comparisons and plots.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="one tomography run from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="sgt-out")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("replay", help="regenerate a stored trajectory and verify it")
    p.add_argument("--trajectory", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("batch", help="population sweep over dims and count levels")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="sgt-out")
    p.add_argument("--seed", type=int, default=None, help="override base_seed")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("summarize", help="summary tables from stored trajectories")
    p.add_argument("runs", nargs="+", help="trajectory files or directories")
    p.add_argument("--out", default="sgt-out")
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("budget", help="error-budget sweep (remove/scale each source)")
    p.add_argument("--config", default=None, help="plan config; default d=5 layout")
    p.add_argument("--out", default="sgt-out")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--population", type=int, default=100)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_budget)

    p = sub.add_parser("compare", help="SGT vs maximum-likelihood fidelity table")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="sgt-out")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("plot", help="convergence figure from summary tables")
    p.add_argument("summaries", nargs="+", help="summary CSV files")
    p.add_argument("--out", default="sgt-out")
    p.add_argument("--name", default="convergence")
    p.add_argument("--title", default=None)
    p.add_argument("--labels", nargs="*", default=None)
    p.set_defaults(func=cmd_plot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"file not found: {exc.filename or exc}", file=sys.stderr)
        return 2
    except SgtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
