"""Benchmark harness: (problem x solver x seed) grids under query budgets,
queries-to-accuracy accounting, and performance profiles.

Records are serialized as JSON lines (one run per line, with a version field)
and profiles as plain CSV, so any plotting tool can consume them.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import baselines, cars, cars_cr, problems
from .oracle import CountingOracle
from .runs import StopRule
from .sampling import DirectionSampler, child_seed

RECORD_VERSION = 1
R_M = 1e20  # sentinel performance ratio for unsolved runs

SOLVER_NAMES = ("cars", "cars-cr", "stp", "nesterov", "spsa")


class InvalidTargets(ValueError):
    """Raised when a solved threshold is requested with f0 <= f_star."""


class ParseError(ValueError):
    """Raised on malformed record files; carries the offending line number."""


@dataclass
class RunRecord:
    problem: str
    solver: str
    seed: int
    budget: int
    queries_to_target: dict[float, int | None]
    final_best: float
    trace: list[tuple[int, float]] = field(default_factory=list)


def solved_query_count(improvements, f0: float, f_star: float,
                       eps: float) -> int | None:
    """First query count at which best-seen drops to f_star + eps*(f0 - f_star).

    ``improvements`` is the oracle's exact list of (count, best_value) events.
    Returns None (unsolved) if the threshold is never reached.
    """
    if not f0 > f_star:
        raise InvalidTargets("need f(x0) > f_star to define relative accuracy")
    if not 0.0 < eps <= 1.0:
        raise ValueError("eps must lie in (0, 1]")
    threshold = f_star + eps * (f0 - f_star)
    for count, value in improvements:
        if math.isfinite(value) and value <= threshold:
            return count
    return None


def _downsample(improvements, ratio: float = 1.5) -> list[tuple[int, float]]:
    """Geometrically spaced subset of improvement events, keeping endpoints."""
    if not improvements:
        return []
    kept = [improvements[0]]
    for count, value in improvements[1:-1]:
        if count >= kept[-1][0] * ratio:
            kept.append((count, value))
    if len(improvements) > 1:
        kept.append(improvements[-1])
    return [(int(c), float(v)) for c, v in kept]


# ---------------------------------------------------------------------------
# solver adapters
# ---------------------------------------------------------------------------

_DEFAULT_SAMPLER_KIND = {
    "cars": "sphere",
    "cars-cr": "sphere",
    "stp": "sphere",
    "nesterov": "gaussian",
    "spsa": "rademacher",
}


def _build_solver(solver: str, dim: int, params: dict):
    if solver not in SOLVER_NAMES:
        raise ValueError(
            f"unknown solver {solver!r}; known: {', '.join(SOLVER_NAMES)}"
        )
    params = dict(params or {})
    kind = params.pop("sampler", _DEFAULT_SAMPLER_KIND[solver])
    m = int(params.pop("m", 1))
    if solver == "cars":
        if "C" in params:
            rule = cars.FixedLimit(float(params.pop("C")))
        else:
            rule = cars.Decreasing(float(params.pop("r0", 0.5)))
        config = cars.CarsConfig(
            L_hat=float(params.pop("L_hat", 2.0)),
            radius_rule=rule,
            curvature_policy=params.pop("curvature_policy", "skip"),
        )
        runner = cars.run_cars
    elif solver == "cars-cr":
        if "epsilon" in params:
            rule = cars_cr.RhoSchedule(
                epsilon=float(params.pop("epsilon")),
                R=float(params.pop("R", 1.0)),
                B=float(params.pop("B", 1.0)),
            )
        else:
            rule = cars.Decreasing(float(params.pop("r0", 0.5)))
        config = cars_cr.CarsCrConfig(M=float(params.pop("M", 2.0)),
                                      radius_rule=rule)
        runner = cars_cr.run_cars_cr
    elif solver == "stp":
        config = baselines.StpConfig()
        runner = baselines.run_stp
    elif solver == "nesterov":
        config = baselines.NesterovConfig(
            alpha=float(params["alpha"]) if "alpha" in params else None,
            mu_fd=float(params.pop("mu_fd", 1e-4)),
        )
        params.pop("alpha", None)
        runner = baselines.run_nesterov_spokoiny
    elif solver == "spsa":
        config = baselines.SpsaConfig(
            a=float(params.pop("a", 0.16)),
            A=float(params.pop("A", 100.0)),
            alpha_exp=float(params.pop("alpha_exp", 0.602)),
            c=float(params.pop("c", 1e-4)),
            gamma_exp=float(params.pop("gamma_exp", 0.101)),
        )
        runner = baselines.run_spsa
    if params:
        raise ValueError(f"unknown parameters for {solver}: {sorted(params)}")
    return runner, config, kind, m


def run_single(problem: problems.Problem, solver: str, seed: int, budget: int,
               eps_list, master_seed: int = 0,
               params: dict | None = None) -> RunRecord:
    """Execute one (problem, solver, seed) run and condense it to a record."""
    eps_list = sorted(eps_list, reverse=True)
    runner, config, kind, m = _build_solver(solver, problem.dim, params)
    sampler = DirectionSampler(
        kind, problem.dim, child_seed(master_seed, problem.name, solver, seed),
        m=m,
    )
    oracle = CountingOracle(problem, budget=budget)
    # f(x0) is recomputed outside the oracle to set the stop target; the
    # runner itself charges the single start-point query.
    f0 = problem.func(np.asarray(problem.x0, dtype=float))
    target = None
    if problem.f_star is not None and eps_list and f0 > problem.f_star:
        target = problem.f_star + min(eps_list) * (f0 - problem.f_star)
    runner(problem, config, oracle, StopRule(target=target), sampler=sampler)
    queries = {}
    for eps in eps_list:
        if problem.f_star is not None and f0 > problem.f_star:
            queries[eps] = solved_query_count(
                oracle.improvements, f0, problem.f_star, eps
            )
        else:
            queries[eps] = None
    return RunRecord(
        problem=problem.name,
        solver=solver,
        seed=seed,
        budget=budget,
        queries_to_target=queries,
        final_best=float(oracle.best_value),
        trace=_downsample(oracle.improvements),
    )


def _run_single_task(args):
    prob, solver, seed, budget, eps_list, master_seed, params = args
    if not isinstance(prob, problems.Problem):
        prob = problems.from_spec(prob)
    return run_single(prob, solver, seed, budget, eps_list, master_seed, params)


def run_grid(problem_list, solvers, seeds, budget: int = 20_000,
             eps_list=(1e-1, 1e-3, 1e-5), master_seed: int = 0,
             params: dict | None = None, jobs: int = 1) -> list[RunRecord]:
    """Run every (problem, solver, seed) combination; deterministic given the
    master seed and independent of execution order or parallelism."""
    # Problems travel to worker processes as their picklable spec; ad-hoc
    # problems without one are passed as objects and only work serially
    # (their func is typically a closure, which does not pickle).
    tasks = [
        (p.spec if p.spec is not None else p, s, seed, budget,
         tuple(eps_list), master_seed, (params or {}).get(s))
        for p in problem_list
        for s in solvers
        for seed in seeds
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_single_task, tasks))
    else:
        records = [_run_single_task(t) for t in tasks]
    records.sort(key=lambda r: (r.problem, r.solver, r.seed))
    return records


# ---------------------------------------------------------------------------
# performance profiles
# ---------------------------------------------------------------------------

def performance_ratios(records, eps: float) -> dict[tuple, dict[str, float]]:
    """Per-instance performance ratios at accuracy ``eps``.

    Each (problem, seed) repeat counts as its own profile instance. Unsolved
    runs get the sentinel ratio R_M, as do all runs of an instance nobody
    solved.
    """
    by_instance: dict[tuple, dict[str, int | None]] = {}
    for rec in records:
        t = rec.queries_to_target.get(eps)
        by_instance.setdefault((rec.problem, rec.seed), {})[rec.solver] = t
    ratios: dict[tuple, dict[str, float]] = {}
    for inst, counts in by_instance.items():
        solved = [t for t in counts.values() if t is not None]
        best = min(solved) if solved else None
        ratios[inst] = {
            s: (t / best if t is not None else R_M)
            for s, t in counts.items()
        }
    return ratios


@dataclass
class ProfileTable:
    solvers: list[str]
    tau_grid: np.ndarray
    rho: dict[str, np.ndarray]


def performance_profile(ratios, tau_grid) -> ProfileTable:
    """Fraction of instances solved within a factor tau of the best solver."""
    tau_grid = np.asarray(tau_grid, dtype=float)
    if tau_grid.size == 0 or np.any(np.diff(tau_grid) <= 0) or tau_grid[0] < 1:
        raise ValueError("tau_grid must be increasing and start at >= 1")
    solvers = sorted({s for inst in ratios.values() for s in inst})
    n = len(ratios)
    rho = {}
    for s in solvers:
        r = np.array([inst.get(s, R_M) for inst in ratios.values()])
        rho[s] = np.array([np.count_nonzero(r <= tau) / n for tau in tau_grid])
    return ProfileTable(solvers=solvers, tau_grid=tau_grid, rho=rho)


# ---------------------------------------------------------------------------
# record and profile serialization
# ---------------------------------------------------------------------------

def write_records(path, records) -> None:
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps({
                "version": RECORD_VERSION,
                "problem": rec.problem,
                "solver": rec.solver,
                "seed": rec.seed,
                "budget": rec.budget,
                "queries_to_target": {
                    repr(eps): cnt for eps, cnt in rec.queries_to_target.items()
                },
                "final_best": rec.final_best,
                "trace": rec.trace,
            }) + "\n")


def read_records(path) -> list[RunRecord]:
    records = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                if obj.get("version") != RECORD_VERSION:
                    raise ValueError(f"unsupported record version {obj.get('version')}")
                records.append(RunRecord(
                    problem=obj["problem"],
                    solver=obj["solver"],
                    seed=int(obj["seed"]),
                    budget=int(obj["budget"]),
                    queries_to_target={
                        float(k): (None if v is None else int(v))
                        for k, v in obj["queries_to_target"].items()
                    },
                    final_best=float(obj["final_best"]),
                    trace=[(int(c), float(v)) for c, v in obj.get("trace", [])],
                ))
            except (ValueError, KeyError, TypeError) as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
    return records


def write_profile_csv(path, table: ProfileTable) -> None:
    with open(path, "w") as fh:
        fh.write("tau," + ",".join(table.solvers) + "\n")
        for i, tau in enumerate(table.tau_grid):
            row = [f"{tau:.10g}"] + [
                f"{table.rho[s][i]:.10g}" for s in table.solvers
            ]
            fh.write(",".join(row) + "\n")
