"""Command line interface: instance generation, solver runs, front
approximation, metrics and performance profiles, manifest-driven
reproduction.

Exit codes: 0 success, 1 usage or data error, 2 empty result, 3 enumeration
capacity exceeded.  ``SPARSEMOO_THREADS`` caps the worker pool used for
independent runs in ``reproduce``.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from .core import CapacityError, SupportSet, project_sparse, support
from .metrics import (
    build_reference_front,
    delta_spread,
    gamma_spread,
    hypervolume_2d,
    performance_profiles,
    purity,
    rescale_logistic_objectives,
)
from .problems import (
    DataError,
    generate_quadratic,
    load_dataset,
    load_instance,
    logistic_problem,
    save_instance,
)
from .sfsd import ParetoArchive, filter_nondominated, initialize, sfsd_run
from .solvers import (
    default_config,
    default_lambda_grid,
    mohyb,
    moiht,
    mosd,
    mospd,
    scalarized_iht,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_EMPTY = 2
EXIT_CAPACITY = 3

BENCHMARK_GRID = {
    10: (2, 5, 8),
    25: (5, 10, 20),
    50: (5, 15, 30),
}
BENCHMARK_KAPPAS = (1.0, 10.0, 100.0)


class EmptyResultError(RuntimeError):
    """A pipeline stage produced no usable rows."""


class _Parser(argparse.ArgumentParser):
    # usage errors must exit with code 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _threads() -> int:
    raw = os.environ.get("SPARSEMOO_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# front CSV round trip


def write_front_csv(path, rows, n: int, m: int):
    """Rows of (fvals, x, SupportSet) -> CSV with 1-based support column."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [f"f{j + 1}" for j in range(m)]
            + ["support"]
            + [f"x_{i + 1}" for i in range(n)]
        )
        for fvals, x, J in rows:
            sup = "|".join(str(i) for i in J.to_1based())
            writer.writerow([repr(float(v)) for v in fvals] + [sup]
                            + [repr(float(v)) for v in x])


def read_front_csv(path):
    """Returns (F, X, supports) with supports as 0-based index tuples."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        m = sum(1 for h in header if h.startswith("f") and h[1:].isdigit())
        fs, xs, sups = [], [], []
        for row in reader:
            fs.append([float(v) for v in row[:m]])
            sup = row[m]
            sups.append(tuple(int(i) - 1 for i in sup.split("|")) if sup else ())
            xs.append([float(v) for v in row[m + 1:]])
    return np.array(fs), np.array(xs), sups


def _write_meta(out_csv, meta):
    meta_path = Path(str(out_csv) + ".meta.json")
    with meta_path.open("w") as fh:
        json.dump(meta, fh, sort_keys=True, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# problem loading


def _load_problem(args):
    """Resolve --instance / --dataset flags into (problem, info)."""
    if getattr(args, "instance", None):
        problem, info = load_instance(args.instance)
        info["source"] = str(args.instance)
        return problem, info
    if getattr(args, "dataset", None):
        if not args.label_column:
            raise ValueError("--label-column is required with --dataset")
        if args.s is None:
            raise ValueError("--s is required with --dataset")
        R, t = load_dataset(args.dataset, args.label_column)
        problem = logistic_problem(R, t)
        return problem, {
            "type": "logistic", "n": problem.n, "s": int(args.s),
            "family": "logistic", "source": str(args.dataset),
        }
    raise ValueError("one of --instance or --dataset is required")


def _config_for(problem, info, args):
    overrides = {}
    if getattr(args, "eps", None) is not None:
        overrides["eps"] = args.eps
    if getattr(args, "solver_budget", None) is not None:
        overrides["max_iter"] = args.solver_budget
    cfg = default_config(problem, family=info["family"], **overrides)
    if getattr(args, "tau0", None) is not None:
        cfg = replace(cfg, penalty=replace(cfg.penalty, tau0=args.tau0))
    return cfg


def _default_box(info):
    return (0.0, 1.0) if info["family"] == "logistic" else (-2.0, 2.0)


# ---------------------------------------------------------------------------
# subcommands


def cmd_generate(args) -> int:
    if args.benchmark_grid:
        if not args.out_dir:
            raise ValueError("--out-dir is required with --benchmark-grid")
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        seeds = [int(v) for v in args.seeds.split(",")]
        count = 0
        for n, s_choices in BENCHMARK_GRID.items():
            for kappa in BENCHMARK_KAPPAS:
                for s in s_choices:
                    for seed in seeds:
                        inst = generate_quadratic(n, kappa, seed)
                        name = f"quad_n{n}_k{int(kappa)}_s{s}_seed{seed}.json"
                        save_instance(out_dir / name, inst, s)
                        count += 1
        print(f"wrote {count} instances to {out_dir}")
        return EXIT_OK
    if args.example4:
        if not args.out:
            raise ValueError("--out is required")
        save_instance(args.out, "example4", args.s if args.s is not None else 1)
        print(f"wrote {args.out}")
        return EXIT_OK
    for name in ("n", "kappa", "s", "out"):
        if getattr(args, name) is None:
            raise ValueError(f"--{name} is required")
    inst = generate_quadratic(args.n, args.kappa, args.seed)
    save_instance(args.out, inst, args.s)
    print(f"wrote {args.out}")
    return EXIT_OK


def _multistart_starts(problem, info, n_starts, seed):
    lo, hi = _default_box(info)
    rng = np.random.default_rng(seed)
    raw = lo + (hi - lo) * rng.random((n_starts, problem.n))
    return [project_sparse(row, info["s"]) for row in raw]


def cmd_solve(args) -> int:
    problem, info = _load_problem(args)
    s = info["s"]
    cfg = _config_for(problem, info, args)
    if args.n_starts < 1:
        raise ValueError("--n-starts must be at least 1")

    deadline_solve = deadline_refine = None
    if args.wallclock is not None:
        now = time.monotonic()
        deadline_solve = now + args.wallclock / 2.0
        deadline_refine = now + args.wallclock

    points = []
    iteration_counts = []
    if args.strategy == "scalarized":
        grid = default_lambda_grid(problem.n)
        points = scalarized_iht(problem, s, grid, np.zeros(problem.n), cfg)
        iteration_counts = [None] * len(points)
    else:
        for x0 in _multistart_starts(problem, info, args.n_starts, args.seed):
            if deadline_solve is not None and time.monotonic() > deadline_solve:
                break
            if args.strategy == "moiht":
                x, trace = moiht(problem, x0, s, cfg)
                iteration_counts.append(len(trace.iterates) - 1)
            elif args.strategy == "mospd":
                x, pd_info = mospd(problem, x0, s, cfg, full_output=True)
                iteration_counts.append(pd_info["outer_iterations"])
            elif args.strategy == "mohyb":
                x, hy_info = mohyb(problem, x0, s, cfg, full_output=True)
                iteration_counts.append(hy_info["moiht_iterations"])
            else:
                raise ValueError(f"unknown strategy {args.strategy!r}")
            points.append(x)

    refined = []
    for x in points:
        if deadline_refine is not None and time.monotonic() > deadline_refine:
            refined.append(x)
            continue
        sup = support(x)
        if sup.size:  # refine on the point's own support, zeros stay fixed
            J = SupportSet(tuple(int(i) for i in sup), problem.n)
            x = mosd(problem, x, J, cfg.eps, cfg)
        refined.append(x)

    rows = []
    for x in refined:
        if not np.all(np.isfinite(x)):
            continue
        fv = np.asarray(problem.evaluate(x), dtype=float)
        if not np.all(np.isfinite(fv)):
            continue
        sup = tuple(int(i) for i in support(x))
        rows.append((fv, x, SupportSet(sup, problem.n)))
    if not rows:
        raise EmptyResultError("no finite solver outputs to report")
    keep = filter_nondominated(np.array([r[0] for r in rows]))
    rows = [rows[i] for i in keep]
    write_front_csv(args.out, rows, problem.n, problem.m)
    _write_meta(args.out, {
        "command": "solve",
        "strategy": args.strategy,
        "seed": args.seed,
        "n_starts": args.n_starts,
        "s": s,
        "L": cfg.L,
        "eps": cfg.eps,
        "max_iter": cfg.max_iter,
        "tau0": cfg.penalty.tau0,
        "iteration_counts": iteration_counts,
        "points": len(rows),
        "wallclock": args.wallclock,
        "instance": info,
    })
    print(f"wrote {args.out} ({len(rows)} nondominated points)")
    return EXIT_OK


def _archive_rows(archive: ParetoArchive):
    rows = [(e.fvals, e.x, e.J) for e in archive.entries()]
    keep = filter_nondominated(np.array([r[0] for r in rows]))
    return [rows[i] for i in keep]


def cmd_front(args) -> int:
    problem, info = _load_problem(args)
    s = info["s"]
    cfg = _config_for(problem, info, args)
    if args.n_starts < 1:
        raise ValueError("--n-starts must be at least 1")

    deadline_init = deadline_run = None
    if args.wallclock is not None:
        now = time.monotonic()
        deadline_init = now + args.wallclock / 2.0
        deadline_run = now + args.wallclock

    archive = initialize(
        problem, s, args.strategy, args.n_starts, args.seed,
        _default_box(info), cfg, deadline=deadline_init,
    )
    if len(archive) == 0:
        raise EmptyResultError("initialization produced no usable points")
    final = sfsd_run(
        problem, archive, s, cfg, args.budget,
        crowding=args.crowding, explore_spacing=args.explore_spacing,
        deadline=deadline_run,
    )
    rows = _archive_rows(final)
    if not rows:
        raise EmptyResultError("front descent produced no points")
    write_front_csv(args.out, rows, problem.n, problem.m)
    _write_meta(args.out, {
        "command": "front",
        "strategy": args.strategy,
        "seed": args.seed,
        "n_starts": args.n_starts,
        "s": s,
        "budget": args.budget,
        "crowding": args.crowding,
        "explore_spacing": args.explore_spacing,
        "L": cfg.L,
        "eps": cfg.eps,
        "archive_points": len(final),
        "front_points": len(rows),
        "wallclock": args.wallclock,
        "instance": info,
    })
    print(f"wrote {args.out} ({len(rows)} nondominated points)")
    return EXIT_OK


def _parse_named_fronts(items):
    named = []
    for item in items:
        if "=" not in item:
            raise ValueError(f"expected NAME=PATH, got {item!r}")
        name, path = item.split("=", 1)
        F, _, _ = read_front_csv(path)
        named.append((name, F))
    return named


def cmd_metrics(args) -> int:
    named = _parse_named_fronts(args.front)
    if not named:
        raise ValueError("at least one --front NAME=PATH is required")
    fronts = [F for _, F in named]
    if args.reference == "combined":
        reference = build_reference_front(fronts)
    else:
        reference, _, _ = read_front_csv(args.reference)
        reference = build_reference_front([reference])
    if reference.shape[0] == 0:
        raise EmptyResultError("reference front is empty")
    ref_point = (reference.max(axis=0) * 1.1).tolist()

    spread_fronts = fronts
    spread_ref = reference
    if args.logistic_scaling:
        rescaled = rescale_logistic_objectives(fronts + [reference])
        spread_fronts, spread_ref = rescaled[:-1], rescaled[-1]

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["solver", "purity", "gamma_spread", "delta_spread", "hypervolume"])
        for (name, F), Fs in zip(named, spread_fronts):
            writer.writerow([
                name,
                repr(purity(F, reference)),
                repr(gamma_spread(Fs, spread_ref)),
                repr(delta_spread(Fs, spread_ref)),
                repr(hypervolume_2d(F, np.asarray(ref_point))),
            ])
    _write_meta(out, {
        "command": "metrics",
        "reference": args.reference,
        "reference_points": int(reference.shape[0]),
        "ref_point": ref_point,
        "logistic_scaling": bool(args.logistic_scaling),
        "fronts": [name for name, _ in named],
    })
    print(f"wrote {out}")
    return EXIT_OK


def _read_metric_table(path):
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        return list(reader)


def cmd_profiles(args) -> int:
    tables = {Path(p).stem: _read_metric_table(p) for p in args.metrics_csv}
    if not tables:
        raise ValueError("at least one --metrics-csv is required")
    solvers = sorted({row["solver"] for rows in tables.values() for row in rows})
    problems = sorted(tables)
    metric_specs = [
        ("purity", True),
        ("gamma_spread", False),
        ("delta_spread", False),
        ("hypervolume", True),
    ]
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for metric, higher in metric_specs:
        V = np.full((len(problems), len(solvers)), np.nan)
        for i, prob in enumerate(problems):
            for row in tables[prob]:
                j = solvers.index(row["solver"])
                val = float(row[metric])
                if higher and val == 0.0:
                    continue  # zero score = failure under the inversion rule
                if np.isfinite(val):
                    V[i, j] = val
        curves = performance_profiles(V, higher_is_better=higher, solvers=solvers)
        path = out_dir / f"{metric}_profile.csv"
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["solver", "tau", "rho"])
            for curve in curves:
                for t, r in zip(curve.taus, curve.rhos):
                    writer.writerow([curve.solver, repr(float(t)), repr(float(r))])
    print(f"wrote profiles for {len(metric_specs)} metrics to {out_dir}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# manifest-driven reproduction


def _front_task(problem, s, family, strategy, n_starts, budget, solver_budget,
                seed_entropy):
    seed = np.random.SeedSequence(seed_entropy).generate_state(1)[0]
    cfg = default_config(problem, family=family, max_iter=solver_budget)
    box = (0.0, 1.0) if family == "logistic" else (-2.0, 2.0)
    archive = initialize(problem, s, strategy, n_starts, int(seed), box, cfg)
    if len(archive) == 0:
        return None
    final = sfsd_run(problem, archive, s, cfg, budget)
    rows = _archive_rows(final)
    return rows or None


def cmd_reproduce(args) -> int:
    manifest_path = Path(args.manifest)
    with manifest_path.open() as fh:
        manifest = json.load(fh)
    out_dir = Path(manifest.get("out_dir", manifest_path.parent / "reproduce_out"))
    out_dir.mkdir(parents=True, exist_ok=True)

    strategies = manifest.get("strategies", ["mohyb"])
    run_seeds = manifest.get("run_seeds", [0])
    n_starts = int(manifest.get("n_starts", 10))
    sfsd_budget = int(manifest.get("sfsd_budget", 10))
    solver_budget = int(manifest.get("solver_budget", 10_000))
    root_seed = int(manifest.get("seed", 0))

    # Materialize instances first; every referenced file must exist up front.
    inst_dir = out_dir / "instances"
    inst_dir.mkdir(exist_ok=True)
    inst_files = []
    for entry in manifest["instances"]:
        if "path" in entry:
            path = (manifest_path.parent / entry["path"]).resolve()
            if not path.exists():
                raise DataError(f"manifest references missing instance {path}")
            inst_files.append(path)
        elif entry.get("type") == "example4":
            path = inst_dir / f"example4_s{entry['s']}.json"
            save_instance(path, "example4", entry["s"])
            inst_files.append(path)
        else:
            inst = generate_quadratic(entry["n"], entry["kappa"], entry.get("seed", 0))
            path = inst_dir / (
                f"quad_n{entry['n']}_k{entry['kappa']:g}_s{entry['s']}"
                f"_seed{entry.get('seed', 0)}.json"
            )
            save_instance(path, inst, entry["s"])
            inst_files.append(path)

    tasks = []
    for ii, path in enumerate(inst_files):
        problem, info = load_instance(path)
        for si, strategy in enumerate(strategies):
            for ri, run_seed in enumerate(run_seeds):
                tasks.append((ii, path.stem, problem, info, si, strategy, ri, run_seed))

    def run_task(task):
        ii, stem, problem, info, si, strategy, ri, run_seed = task
        rows = _front_task(
            problem, info["s"], info["family"], strategy, n_starts,
            sfsd_budget, solver_budget,
            (root_seed, ii, si, int(run_seed)),
        )
        return task, rows

    workers = _threads()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_task, tasks))
    else:
        results = [run_task(t) for t in tasks]

    front_dir = out_dir / "fronts"
    by_instance: dict = {}
    for (ii, stem, problem, info, si, strategy, ri, run_seed), rows in results:
        if rows is None:
            continue
        path = front_dir / stem / f"{strategy}_seed{run_seed}.csv"
        write_front_csv(path, rows, problem.n, problem.m)
        F = np.array([r[0] for r in rows])
        by_instance.setdefault(stem, []).append((strategy, int(run_seed), F))

    if not by_instance:
        raise EmptyResultError("no fronts were produced")

    # Per instance: combined reference over every produced front, then keep
    # the best and worst run per strategy by purity.
    metrics_dir = out_dir / "metrics"
    metrics_dir.mkdir(exist_ok=True)
    best_files, worst_files = [], []
    for stem, runs in sorted(by_instance.items()):
        reference = build_reference_front([F for _, _, F in runs])
        ref_point = reference.max(axis=0) * 1.1
        per_strategy: dict = {}
        for strategy, run_seed, F in runs:
            per_strategy.setdefault(strategy, []).append((purity(F, reference), run_seed, F))
        for tag, chooser in (("best", max), ("worst", min)):
            path = metrics_dir / f"{stem}_{tag}.csv"
            with path.open("w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(
                    ["solver", "purity", "gamma_spread", "delta_spread", "hypervolume"]
                )
                for strategy in sorted(per_strategy):
                    pur, _, F = chooser(per_strategy[strategy], key=lambda t: t[0])
                    writer.writerow([
                        strategy,
                        repr(pur),
                        repr(gamma_spread(F, reference)),
                        repr(delta_spread(F, reference)),
                        repr(hypervolume_2d(F, ref_point)),
                    ])
            (best_files if tag == "best" else worst_files).append(path)

    for tag, files in (("best", best_files), ("worst", worst_files)):
        ns = argparse.Namespace(metrics_csv=[str(f) for f in files],
                                out_dir=str(out_dir / "profiles" / tag))
        cmd_profiles(ns)

    summary = {
        "manifest": str(manifest_path),
        "instances": [str(p) for p in inst_files],
        "strategies": strategies,
        "run_seeds": [int(v) for v in run_seeds],
        "threads": workers,
        "note": (
            "reference fronts combine only the runs in this manifest; with "
            "few seeds they are sparser than a full-protocol reference"
        ),
    }
    with (out_dir / "summary.json").open("w") as fh:
        json.dump(summary, fh, sort_keys=True, indent=2)
        fh.write("\n")
    print(f"reproduced {len(by_instance)} instances into {out_dir}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="sparsemoo",
        description=__doc__,
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add_common_problem_flags(sp):
        sp.add_argument("--instance", help="instance JSON file")
        sp.add_argument("--dataset", help="dataset CSV for logistic regression")
        sp.add_argument("--label-column", help="label column name for --dataset")
        sp.add_argument("--s", type=int, default=None,
                        help="cardinality bound (datasets only; instances carry s)")
        sp.add_argument("--seed", type=int, default=0, help="random seed")
        sp.add_argument("--eps", type=float, default=None,
                        help="stationarity tolerance (default 1e-7)")
        sp.add_argument("--solver-budget", type=int, default=None,
                        help="single-point solver iteration budget (default 10000)")
        sp.add_argument("--tau0", type=float, default=None,
                        help="initial penalty weight for mospd/mohyb")
        sp.add_argument("--wallclock", type=float, default=None,
                        help="wall-clock limit in seconds, split across phases "
                             "(non-deterministic benchmark parity mode)")

    gen = sub.add_parser("generate", help="write benchmark instance files",
                         formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    gen.add_argument("--n", type=int, default=None, help="dimension")
    gen.add_argument("--kappa", type=float, default=None, help="condition number")
    gen.add_argument("--s", type=int, default=None, help="cardinality bound")
    gen.add_argument("--seed", type=int, default=0, help="generator seed")
    gen.add_argument("--out", default=None, help="output instance JSON")
    gen.add_argument("--example4", action="store_true",
                     help="write the fixed worked 2-D instance instead")
    gen.add_argument("--benchmark-grid", action="store_true",
                     help="write the full 81-instance benchmark grid")
    gen.add_argument("--out-dir", default=None, help="directory for --benchmark-grid")
    gen.add_argument("--seeds", default="0,1,2",
                     help="comma-separated seeds for --benchmark-grid")
    gen.set_defaults(func=cmd_generate)

    solve = sub.add_parser("solve", help="multi-start single-point solver with refinement",
                           formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    add_common_problem_flags(solve)
    solve.add_argument("--strategy", default="mohyb",
                       choices=["moiht", "mospd", "mohyb", "scalarized"])
    solve.add_argument("--n-starts", type=int, default=10, help="number of starts")
    solve.add_argument("--out", required=True, help="output front CSV")
    solve.set_defaults(func=cmd_solve)

    front = sub.add_parser("front", help="two-phase front approximation",
                           formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    add_common_problem_flags(front)
    front.add_argument("--strategy", default="mohyb",
                       choices=["moiht", "mospd", "mohyb", "scalarized"],
                       help="phase-one initialization strategy")
    front.add_argument("--n-starts", type=int, default=10, help="number of starts")
    front.add_argument("--budget", type=int, default=20, help="front descent sweeps")
    front.add_argument("--crowding", default="mean", choices=["off", "mean", "quantile"],
                       help="exploration crowding filter")
    front.add_argument("--explore-spacing", type=float, default=5e-3,
                       help="relative objective-space spacing floor for "
                            "exploration insertions (0 = literal rule)")
    front.add_argument("--out", required=True, help="output front CSV")
    front.set_defaults(func=cmd_front)

    met = sub.add_parser("metrics", help="front-quality metrics against a reference",
                         formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    met.add_argument("--front", action="append", default=[],
                     help="NAME=PATH front CSV (repeatable)")
    met.add_argument("--reference", default="combined",
                     help="'combined' or a reference front CSV path")
    met.add_argument("--logistic-scaling", action="store_true",
                     help="log10 f2 + joint [0,1] rescale before spread metrics")
    met.add_argument("--out", required=True, help="output metrics CSV")
    met.set_defaults(func=cmd_metrics)

    prof = sub.add_parser("profiles", help="performance profiles from metric tables",
                          formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    prof.add_argument("--metrics-csv", action="append", default=[],
                      help="metrics CSV from the metrics command, one per problem "
                           "(repeatable)")
    prof.add_argument("--out-dir", required=True, help="output directory")
    prof.set_defaults(func=cmd_profiles)

    rep = sub.add_parser("reproduce", help="run a full experiment manifest",
                         formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    rep.add_argument("manifest", help="experiment manifest JSON")
    rep.set_defaults(func=cmd_reproduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not getattr(args, "func", None):
        parser.print_help()
        return EXIT_USAGE
    try:
        return args.func(args)
    except (ValueError, DataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EmptyResultError as exc:
        print(f"empty result: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def console_main():
    sys.exit(main())


if __name__ == "__main__":
    console_main()
