"""Shared run-loop plumbing: stop rules and in-memory solve results."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class StopRule:
    """When to stop a run, besides exhausting the oracle budget.

    ``target`` is an absolute objective value: the run stops once the oracle's
    best-seen value is <= target. ``max_iters`` caps the iteration count.
    """

    target: float | None = None
    max_iters: int | None = None


@dataclass
class SolveResult:
    """Everything a single solver run produced, kept in memory."""

    solver: str
    problem: str
    iterations: int
    x_final: np.ndarray
    fx_history: list = field(default_factory=list)

    @property
    def f_final(self) -> float:
        return self.fx_history[-1]


def should_stop(oracle, stop: StopRule, iterations: int, queries_per_iter: int) -> bool:
    if stop.max_iters is not None and iterations >= stop.max_iters:
        return True
    if (
        stop.target is not None
        and oracle.best_value is not None
        and oracle.best_value <= stop.target
    ):
        return True
    return oracle.remaining < queries_per_iter
