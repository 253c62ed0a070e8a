"""Curvature-aware random search: a three-query-per-iteration zeroth-order solver.

Each iteration probes the objective at two symmetric points along a random
direction, forms central-difference estimates of the first and second
directional derivatives, and takes a damped one-dimensional Newton step. A
safeguard picks the next iterate as the best of all points evaluated this
iteration plus the current one, so the objective sequence never increases.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .oracle import CountingOracle, is_better
from .runs import SolveResult, StopRule, should_stop
from .sampling import DirectionSampler, sample_averaged_gradient_direction

# Cap on the Newton displacement length; near-zero curvature otherwise
# produces overflowing candidates that the safeguard would reject anyway.
MAX_STEP_NORM = 1e12


class NonpositiveCurvature(RuntimeError):
    """Raised when a Newton candidate is requested with h_r <= 0."""


class InvalidConstants(ValueError):
    """Raised on nonpositive smoothness/convexity constants."""


@dataclass(frozen=True)
class Decreasing:
    """Practical radius rule: scale-free radius c0/(k+2)."""

    c0: float = 0.5


@dataclass(frozen=True)
class FixedLimit:
    """Theory-mode radius rule: scale-free radius fixed at C."""

    C: float = 0.1


@dataclass(frozen=True)
class HolderConstants:
    """Smoothness constants defining the theory-mode sampling-radius limit."""

    a: float
    L_a: float
    mu: float
    epsilon: float
    gamma: float = 1.0


@dataclass
class CarsConfig:
    L_hat: float = 2.0
    radius_rule: Decreasing | FixedLimit = field(default_factory=Decreasing)
    curvature_policy: str = "skip"  # "skip" or "always"

    def __post_init__(self):
        if self.L_hat <= 0:
            raise InvalidConstants("L_hat must be positive")
        if self.curvature_policy not in ("skip", "always"):
            raise ValueError("curvature_policy must be 'skip' or 'always'")


@dataclass
class CarsState:
    k: int
    x: np.ndarray
    fx: float


@dataclass(frozen=True)
class IterationReport:
    k: int
    r: float
    d_r: float
    h_r: float
    values: dict
    chosen: str
    queries: int


def c1_constant(a: float, L_a: float) -> float:
    return ((a + 1.0) * (a + 2.0) / (2.0 ** (0.5 + a) * L_a)) ** (1.0 / (1.0 + a))


def c2_constant(a: float, L_a: float) -> float:
    return ((a + 1.0) * (a + 2.0) / (4.0 * (math.sqrt(2.0) + 1.0) * L_a)) ** (1.0 / a)


def radius_limit(hc: HolderConstants) -> float:
    """Scale-free sampling-radius limit from the Hoelder constants.

    Invariant under the joint rescaling (mu, L_a, epsilon) -> (t*mu, t*L_a,
    t*epsilon), matching the objective-scale invariance of the solver.
    """
    if min(hc.a, hc.L_a, hc.mu, hc.epsilon, hc.gamma) <= 0 or hc.a > 1 or hc.gamma > 1:
        raise InvalidConstants("need 0 < a <= 1, 0 < gamma <= 1, positive L_a, mu, epsilon")
    first = c1_constant(hc.a, hc.L_a) * (
        hc.gamma * math.sqrt(2.0 * hc.mu * hc.epsilon)
    ) ** (1.0 / (1.0 + hc.a))
    second = c2_constant(hc.a, hc.L_a) * hc.mu ** (1.0 / hc.a)
    return min(first, second)


def central_differences(oracle: CountingOracle, x, fx, u, r):
    """First/second central differences along u with half-width r.

    Consumes exactly two queries; returns (d_r, h_r, f_plus, f_minus) so the
    endpoint values can be reused by the safeguard.
    """
    if r <= 0:
        raise ValueError("sampling radius must be positive")
    f_plus = oracle.evaluate(x + r * u)
    f_minus = oracle.evaluate(x - r * u)
    d_r = (f_plus - f_minus) / (2 * r)
    h_r = (f_plus - 2 * fx + f_minus) / r**2
    return d_r, h_r, f_plus, f_minus


def cars_candidate(x, fx, u, d_r, h_r, L_hat: float):
    """Damped Newton candidate x - (d_r / (L_hat h_r)) u. No queries consumed.

    h_r < 0 is allowed (ablation policy); h_r == 0 has no Newton step.
    """
    if h_r == 0:
        raise NonpositiveCurvature("no curvature along the sampled direction")
    step = d_r / (L_hat * h_r)
    # dot-based norm keeps exact (rational) inputs usable in oracle tests
    u_norm = math.sqrt(float(np.dot(u, u)))
    if abs(step) * u_norm > MAX_STEP_NORM:
        step = math.copysign(MAX_STEP_NORM / u_norm, step)
    return x - step * u


def _scale_free_radius(rule, k: int, u_norm: float) -> float:
    if u_norm == 0:
        raise ValueError("direction has zero norm")
    if isinstance(rule, FixedLimit):
        return rule.C / u_norm
    return rule.c0 / ((k + 2) * u_norm)


def _pick(candidates):
    """Argmin over (label, point, value) triples; earliest wins ties and
    non-finite values lose to finite ones."""
    label, point, value = candidates[0]
    for lab, pt, val in candidates[1:]:
        if is_better(val, value):
            label, point, value = lab, pt, val
    return label, point, value


def cars_step(state: CarsState, config: CarsConfig, sampler: DirectionSampler,
              oracle: CountingOracle):
    """One safeguarded curvature-aware step. 3 queries, or 2 under the skip rule."""
    queries_before = oracle.count
    if sampler.kind == "averaged":
        probe_r = _scale_free_radius(config.radius_rule, state.k, 1.0)
        u = sample_averaged_gradient_direction(sampler, oracle, state.x, probe_r)
        if not np.any(u):
            u = None  # flat probe; fall through to a fresh Gaussian draw
    else:
        u = sampler.sample()
    if u is None:
        u = sampler.rng.standard_normal(sampler.dim)
    u_norm = float(np.linalg.norm(u))
    r = _scale_free_radius(config.radius_rule, state.k, u_norm)
    d_r, h_r, f_plus, f_minus = central_differences(oracle, state.x, state.fx, u, r)

    candidates = [
        ("current", state.x, state.fx),
        ("minus", state.x - r * u, f_minus),
        ("plus", state.x + r * u, f_plus),
    ]
    attempt = h_r > 0 or (config.curvature_policy == "always" and h_r != 0)
    if attempt and d_r != 0:
        x_cars = cars_candidate(state.x, state.fx, u, d_r, h_r, config.L_hat)
        f_cars = oracle.evaluate(x_cars)
        candidates.insert(1, ("cars", x_cars, f_cars))

    chosen, x_next, f_next = _pick(candidates)
    report = IterationReport(
        k=state.k,
        r=r,
        d_r=d_r,
        h_r=h_r,
        values={lab: val for lab, _, val in candidates},
        chosen=chosen,
        queries=oracle.count - queries_before,
    )
    return CarsState(k=state.k + 1, x=x_next, fx=f_next), report


def run_cars(problem, config: CarsConfig, oracle: CountingOracle,
             stop: StopRule = StopRule(), sampler: DirectionSampler | None = None,
             seed=0) -> SolveResult:
    """Drive CARS from the problem's start point until a stop condition."""
    if sampler is None:
        sampler = DirectionSampler("sphere", problem.dim, seed)
    x0 = np.asarray(problem.x0, dtype=float)
    fx = oracle.evaluate(x0)
    state = CarsState(k=0, x=x0, fx=fx)
    history = [fx]
    # Worst-case queries per iteration is 3 (2 differences + 1 candidate);
    # averaged-direction sampling adds 2m probe queries.
    per_iter = 3 + (2 * sampler.m if sampler.kind == "averaged" else 0)
    with np.errstate(over="ignore", invalid="ignore"):
        while not should_stop(oracle, stop, state.k, per_iter):
            state, _ = cars_step(state, config, sampler, oracle)
            history.append(state.fx)
    return SolveResult(
        solver="cars",
        problem=problem.name,
        iterations=state.k,
        x_final=state.x,
        fx_history=history,
    )
