"""Command-line interface: run single solves, benchmark grids, and profiles.

Exit codes: 0 success, 2 configuration error, 3 I/O error. The environment
variable ``CARSOPT_OUT`` sets the default output directory (default: cwd).
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import bench, problems
from .cars import HolderConstants, radius_limit


class ConfigError(Exception):
    pass


def _out_dir() -> Path:
    return Path(os.environ.get("CARSOPT_OUT", "."))


def _parse_eps(text: str) -> list[float]:
    try:
        eps = [float(tok) for tok in text.split(",") if tok]
    except ValueError as exc:
        raise ConfigError(f"bad accuracy list {text!r}") from exc
    if not eps or any(not 0 < e <= 1 for e in eps):
        raise ConfigError("accuracies must lie in (0, 1]")
    return eps


def _parse_sets(pairs) -> dict:
    out = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise ConfigError(f"--set expects key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        try:
            out[key] = float(value)
        except ValueError:
            out[key] = value
    return out


def _solver_params(args) -> dict | None:
    params = _parse_sets(getattr(args, "set", None))
    if getattr(args, "theory_mode", False):
        hc = HolderConstants(
            a=float(params.pop("a", 1.0)),
            L_a=float(params.pop("L_a", 1.0)),
            mu=float(params.pop("mu", 1.0)),
            epsilon=float(params.pop("target_eps", 1e-4)),
            gamma=float(params.pop("gamma", 1.0)),
        )
        params["C"] = radius_limit(hc)
    return params or None


def _lookup_problem(name: str) -> problems.Problem:
    try:
        return problems.lookup(name)
    except problems.UnknownProblem as exc:
        raise ConfigError(str(exc)) from exc


def _check_solver(name: str) -> str:
    if name not in bench.SOLVER_NAMES:
        raise ConfigError(
            f"unknown solver {name!r}; valid solvers: "
            + ", ".join(bench.SOLVER_NAMES)
        )
    return name


def cmd_list(args) -> int:
    print("problems:")
    for name in problems.problem_names():
        p = problems.lookup(name)
        print(f"  {name} (d={p.dim})")
    print("solvers:")
    for name in bench.SOLVER_NAMES:
        print(f"  {name}")
    return 0


def cmd_run(args) -> int:
    problem = _lookup_problem(args.problem)
    solver = _check_solver(args.solver)
    record = bench.run_single(
        problem, solver, seed=args.seed, budget=args.budget,
        eps_list=_parse_eps(args.eps), master_seed=args.master_seed,
        params=_solver_params(args),
    )
    out = Path(args.out) if args.out else _out_dir() / "run.jsonl"
    bench.write_records(out, [record])
    print(f"problem={record.problem} solver={record.solver} "
          f"final_best={record.final_best:.6g} queries={record.budget}")
    for eps, cnt in sorted(record.queries_to_target.items(), reverse=True):
        status = cnt if cnt is not None else "UNSOLVED"
        print(f"  eps={eps:g}: {status}")
    print(f"wrote {out}")
    return 0


def cmd_grid(args) -> int:
    if args.problems:
        plist = [_lookup_problem(n) for n in args.problems.split(",")]
    else:
        plist = problems.mgh_suite()
    solvers = [
        _check_solver(s)
        for s in (args.solvers.split(",") if args.solvers else bench.SOLVER_NAMES)
    ]
    records = bench.run_grid(
        plist, solvers, seeds=range(args.seeds), budget=args.budget,
        eps_list=_parse_eps(args.eps), master_seed=args.master_seed,
        jobs=args.jobs,
    )
    out = Path(args.out) if args.out else _out_dir() / "grid.jsonl"
    bench.write_records(out, records)
    print(f"wrote {len(records)} records to {out}")
    return 0


def cmd_profile(args) -> int:
    records = bench.read_records(args.records)
    if not records:
        raise ConfigError(f"no records in {args.records}")
    eps = float(args.eps)
    available = sorted(records[0].queries_to_target)
    if eps not in available:
        raise ConfigError(
            f"accuracy {eps:g} not present in records; available: "
            + ", ".join(f"{e:g}" for e in available)
        )
    ratios = bench.performance_ratios(records, eps)
    tau_grid = np.geomspace(1.0, args.tau_max, args.tau_points)
    table = bench.performance_profile(ratios, tau_grid)
    out = Path(args.out) if args.out else _out_dir() / f"profile_{eps:g}.csv"
    bench.write_profile_csv(out, table)
    print(f"wrote {out}")
    if not args.no_figure:
        from .plotting import plot_profile

        fig_path = out.with_suffix(".png")
        plot_profile(table, fig_path, title=f"accuracy {eps:g}")
        print(f"wrote {fig_path}")
    return 0


def cmd_quartic(args) -> int:
    problem = problems.make_quartic(args.dim, seed=args.problem_seed)
    solvers = [
        _check_solver(s)
        for s in (args.solvers.split(",") if args.solvers else bench.SOLVER_NAMES)
    ]
    records = bench.run_grid(
        [problem], solvers, seeds=range(args.seeds), budget=args.budget,
        eps_list=_parse_eps(args.eps), master_seed=args.master_seed,
        jobs=args.jobs,
    )
    out = Path(args.out) if args.out else _out_dir() / "quartic.jsonl"
    bench.write_records(out, records)
    print(f"wrote {len(records)} records to {out}")
    if not args.no_figure:
        from .plotting import plot_traces

        fig_path = Path(out).with_suffix(".png")
        plot_traces(records, problem.f_star, fig_path,
                    title=f"convex quartic, d={args.dim}")
        print(f"wrote {fig_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="carsopt",
        description="Curvature-aware random search benchmark harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list registered problems and solvers")

    run = sub.add_parser("run", help="single (problem, solver, seed) run")
    run.add_argument("--problem", required=True)
    run.add_argument("--solver", required=True)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--master-seed", type=int, default=0)
    run.add_argument("--budget", type=int, default=20_000)
    run.add_argument("--eps", default="1e-1,1e-3,1e-5")
    run.add_argument("--set", action="append", metavar="KEY=VALUE",
                     help="solver parameter override (repeatable)")
    run.add_argument("--theory-mode", action="store_true",
                     help="use the fixed scale-free radius limit computed "
                          "from a, L_a, mu, target_eps, gamma overrides")
    run.add_argument("--out")

    grid = sub.add_parser("grid", help="full problems x solvers x seeds grid")
    grid.add_argument("--problems", help="comma-separated names "
                                         "(default: benchmark suite)")
    grid.add_argument("--solvers", help="comma-separated names (default: all)")
    grid.add_argument("--seeds", type=int, default=10)
    grid.add_argument("--master-seed", type=int, default=0)
    grid.add_argument("--budget", type=int, default=20_000)
    grid.add_argument("--eps", default="1e-1,1e-3,1e-5")
    grid.add_argument("--jobs", type=int, default=1)
    grid.add_argument("--out")

    prof = sub.add_parser("profile", help="performance profile from records")
    prof.add_argument("--records", required=True)
    prof.add_argument("--eps", required=True)
    prof.add_argument("--tau-max", type=float, default=1e3)
    prof.add_argument("--tau-points", type=int, default=200)
    prof.add_argument("--out")
    prof.add_argument("--no-figure", action="store_true")

    quart = sub.add_parser("quartic", help="convex quartic comparison run")
    quart.add_argument("--dim", type=int, default=30)
    quart.add_argument("--problem-seed", type=int, default=0)
    quart.add_argument("--solvers")
    quart.add_argument("--seeds", type=int, default=10)
    quart.add_argument("--master-seed", type=int, default=0)
    quart.add_argument("--budget", type=int, default=100_000)
    quart.add_argument("--eps", default="1e-1,1e-3,1e-6")
    quart.add_argument("--jobs", type=int, default=1)
    quart.add_argument("--out")
    quart.add_argument("--no-figure", action="store_true")

    return parser


_COMMANDS = {
    "list": cmd_list,
    "run": cmd_run,
    "grid": cmd_grid,
    "profile": cmd_profile,
    "quartic": cmd_quartic,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except bench.ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
