"""Reference zeroth-order comparators: three-point search, random gradient-free
descent with a forward-difference probe, and simultaneous-perturbation descent.

All three cache f(x_k) from the previous iteration, so their per-iteration
query counts are 2, 2, and 3 respectively. Only the three-point method is
monotone; the other two are tracked through the oracle's best-seen record.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .cars import CarsState, _pick
from .oracle import CountingOracle
from .runs import SolveResult, StopRule, should_stop
from .sampling import DirectionSampler


@dataclass
class StpConfig:
    """Three-point direct search with a decreasing step schedule."""

    step_schedule: Callable[[int], float] = lambda k: 1.0 / math.sqrt(k + 1)


@dataclass
class NesterovConfig:
    """Random-direction forward-difference descent.

    ``alpha`` defaults to 1/(4(d+4)) at run start when left as None.
    """

    alpha: float | None = None
    mu_fd: float = 1e-4


@dataclass
class SpsaConfig:
    """Standard decaying-gain simultaneous perturbation parameters."""

    a: float = 0.16
    A: float = 100.0
    alpha_exp: float = 0.602
    c: float = 1e-4
    gamma_exp: float = 0.101

    def a_k(self, k: int) -> float:
        return self.a / (self.A + k + 1) ** self.alpha_exp

    def c_k(self, k: int) -> float:
        return self.c / (k + 1) ** self.gamma_exp


def stp_step(state: CarsState, config: StpConfig, sampler: DirectionSampler,
             oracle: CountingOracle) -> CarsState:
    """Best of {current, forward, backward} along a random direction. 2 queries."""
    u = sampler.sample()
    alpha = config.step_schedule(state.k)
    x_plus = state.x + alpha * u
    x_minus = state.x - alpha * u
    f_plus = oracle.evaluate(x_plus)
    f_minus = oracle.evaluate(x_minus)
    _, x_next, f_next = _pick([
        ("current", state.x, state.fx),
        ("plus", x_plus, f_plus),
        ("minus", x_minus, f_minus),
    ])
    return CarsState(k=state.k + 1, x=x_next, fx=f_next)


def nesterov_spokoiny_step(state: CarsState, config: NesterovConfig,
                           sampler: DirectionSampler,
                           oracle: CountingOracle) -> CarsState:
    """Forward-difference gradient surrogate step. 2 queries (probe + iterate)."""
    u = sampler.sample()
    mu = config.mu_fd
    alpha = config.alpha
    if alpha is None:
        alpha = 1.0 / (4.0 * (sampler.dim + 4))
    g_tilde = (oracle.evaluate(state.x + mu * u) - state.fx) / mu
    x_next = state.x - alpha * g_tilde * u
    f_next = oracle.evaluate(x_next)
    return CarsState(k=state.k + 1, x=x_next, fx=f_next)


def spsa_step(state: CarsState, config: SpsaConfig, sampler: DirectionSampler,
              oracle: CountingOracle) -> CarsState:
    """Simultaneous-perturbation gradient estimate and decaying-gain step. 3 queries."""
    delta = sampler.sample()
    a_k = config.a_k(state.k)
    c_k = config.c_k(state.k)
    f_plus = oracle.evaluate(state.x + c_k * delta)
    f_minus = oracle.evaluate(state.x - c_k * delta)
    g_hat = (f_plus - f_minus) / (2.0 * c_k) / delta
    x_next = state.x - a_k * g_hat
    f_next = oracle.evaluate(x_next)
    return CarsState(k=state.k + 1, x=x_next, fx=f_next)


def _run(name, step, per_iter, problem, config, oracle, stop, sampler,
         default_kind, seed):
    if sampler is None:
        sampler = DirectionSampler(default_kind, problem.dim, seed)
    x0 = np.asarray(problem.x0, dtype=float)
    fx = oracle.evaluate(x0)
    state = CarsState(k=0, x=x0, fx=fx)
    history = [fx]
    with np.errstate(over="ignore", invalid="ignore"):
        while not should_stop(oracle, stop, state.k, per_iter):
            state = step(state, config, sampler, oracle)
            history.append(state.fx)
    return SolveResult(solver=name, problem=problem.name, iterations=state.k,
                       x_final=state.x, fx_history=history)


def run_stp(problem, config: StpConfig, oracle, stop: StopRule = StopRule(),
            sampler=None, seed=0) -> SolveResult:
    return _run("stp", stp_step, 2, problem, config, oracle, stop, sampler,
                "sphere", seed)


def run_nesterov_spokoiny(problem, config: NesterovConfig, oracle,
                          stop: StopRule = StopRule(), sampler=None,
                          seed=0) -> SolveResult:
    return _run("nesterov", nesterov_spokoiny_step, 2, problem, config, oracle,
                stop, sampler, "gaussian", seed)


def run_spsa(problem, config: SpsaConfig, oracle, stop: StopRule = StopRule(),
             sampler=None, seed=0) -> SolveResult:
    return _run("spsa", spsa_step, 3, problem, config, oracle, stop, sampler,
                "rademacher", seed)
