"""Cubic-regularized variant: four queries per iteration, adaptive damping.

The one-dimensional model along the sampled direction is
``P(a) = d*a + h*a^2/2 + M*|a|^3/6``. Its global minimizer has the closed form
:func:`cubic_minimizer_phi`, which equals a Newton step damped by the adaptive
constant of :func:`adaptive_L_hat`. Both signed candidates are evaluated and
the safeguard keeps the best of the five points seen this iteration.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cars import CarsState, Decreasing, IterationReport, central_differences, _pick
from .oracle import CountingOracle
from .runs import SolveResult, StopRule, should_stop
from .sampling import DirectionSampler


class ZeroCurvature(RuntimeError):
    """Raised when the adaptive damping constant is requested with h_r = 0."""


@dataclass(frozen=True)
class RhoSchedule:
    """Theory-mode radius rule r_k = min(rho * sqrt(eps) / sqrt(k+2), R).

    ``B`` should upper-bound max(L R^2, M R^3, f(x0) - f_star); overestimating
    it only shrinks the radius, which is safe.
    """

    epsilon: float
    R: float
    B: float

    @property
    def rho(self) -> float:
        return self.R / math.sqrt(2.0 * self.B)


@dataclass
class CarsCrConfig:
    M: float = 2.0
    radius_rule: Decreasing | RhoSchedule = field(default_factory=Decreasing)

    def __post_init__(self):
        if self.M <= 0:
            raise ValueError("M must be positive")


def cubic_model(alpha: float, d: float, h: float, M: float) -> float:
    return d * alpha + 0.5 * h * alpha**2 + M / 6.0 * abs(alpha) ** 3


def cubic_minimizer_phi(d: float, h: float, M: float) -> float:
    """Global minimizer of the cubic model, in the cancellation-free form.

    Well-defined for all h >= 0 and M > 0, including d = h = 0 (returns 0).
    The sign of the result is always opposite to the sign of d.
    """
    if M <= 0:
        raise ValueError("M must be positive")
    if h < 0:
        raise ValueError("h must be nonnegative")
    if d == 0:
        return 0.0
    return -2.0 * d / (h + math.sqrt(h * h + 2.0 * M * abs(d)))


def adaptive_L_hat(d_r: float, h_r: float, M: float) -> float:
    """Damping constant making -d_r/(L_hat * h_r) equal the cubic minimizer."""
    if h_r == 0:
        raise ZeroCurvature("use cubic_minimizer_phi directly when h_r = 0")
    return 0.5 + math.sqrt(0.25 + M * abs(d_r) / (2.0 * h_r * h_r))


def _cr_radius(rule, k: int) -> float:
    if isinstance(rule, RhoSchedule):
        return min(rule.rho * math.sqrt(rule.epsilon) / math.sqrt(k + 2), rule.R)
    return rule.c0 / (k + 2)


def cr_step(state, config: CarsCrConfig, sampler: DirectionSampler,
            oracle: CountingOracle):
    """One cubic-regularized step. Exactly 4 queries."""
    queries_before = oracle.count
    u = sampler.sample()
    u = u / float(np.linalg.norm(u))  # the cubic model assumes unit directions
    r = _cr_radius(config.radius_rule, state.k)
    d_r, h_r, f_plus, f_minus = central_differences(oracle, state.x, state.fx, u, r)
    h = max(h_r, 0.0)  # negative only through finite-difference noise on convex f

    alpha = cubic_minimizer_phi(d_r, h, config.M)
    x_crp = state.x + alpha * u
    x_crm = state.x - alpha * u
    f_crp = oracle.evaluate(x_crp)
    f_crm = oracle.evaluate(x_crm)

    chosen, x_next, f_next = _pick([
        ("current", state.x, state.fx),
        ("cr+", x_crp, f_crp),
        ("cr-", x_crm, f_crm),
        ("minus", state.x - r * u, f_minus),
        ("plus", state.x + r * u, f_plus),
    ])
    report = IterationReport(
        k=state.k,
        r=r,
        d_r=d_r,
        h_r=h_r,
        values={"current": state.fx, "cr+": f_crp, "cr-": f_crm,
                "minus": f_minus, "plus": f_plus},
        chosen=chosen,
        queries=oracle.count - queries_before,
    )
    return CarsState(k=state.k + 1, x=x_next, fx=f_next), report


def run_cars_cr(problem, config: CarsCrConfig, oracle: CountingOracle,
                stop: StopRule = StopRule(),
                sampler: DirectionSampler | None = None, seed=0) -> SolveResult:
    """Drive the cubic-regularized solver from the problem's start point."""
    if sampler is None:
        sampler = DirectionSampler("sphere", problem.dim, seed)
    x0 = np.asarray(problem.x0, dtype=float)
    fx = oracle.evaluate(x0)
    state = CarsState(k=0, x=x0, fx=fx)
    history = [fx]
    with np.errstate(over="ignore", invalid="ignore"):
        while not should_stop(oracle, stop, state.k, 4):
            state, _ = cr_step(state, config, sampler, oracle)
            history.append(state.fx)
    return SolveResult(
        solver="cars-cr",
        problem=problem.name,
        iterations=state.k,
        x_final=state.x,
        fx_history=history,
    )
