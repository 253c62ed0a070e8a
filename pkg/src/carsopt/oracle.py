"""Black-box objective wrapper with exact query counting and best-seen tracking.

Every solver evaluates the objective exclusively through :class:`CountingOracle`,
so query complexity is measured identically across algorithms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np


class BudgetExhausted(RuntimeError):
    """Raised when an evaluation is requested after the query budget is spent."""


class DimensionMismatch(ValueError):
    """Raised when the queried point does not match the objective dimension."""


class NoQueriesYet(RuntimeError):
    """Raised when the best-seen record is requested before any evaluation."""


@dataclass(frozen=True)
class Objective:
    """A deterministic black-box function of a fixed-dimension real vector."""

    dim: int
    func: Callable[[np.ndarray], float]


def is_better(a, b) -> bool:
    """True if value ``a`` is strictly preferable to ``b``.

    Non-finite values (NaN, +-inf) lose against any finite value and never
    beat each other, so argmin selections are well defined even when the
    objective overflows far from the start point.
    """
    a_finite = math.isfinite(a)
    if not a_finite:
        return False
    if not math.isfinite(b):
        return True
    return a < b


class CountingOracle:
    """Wraps an objective, counting queries and tracking the best point seen.

    Owned by exactly one solver run; not shared across concurrent runs.
    ``improvements`` holds one ``(count, value)`` pair per strict improvement
    of the best-seen value, which is enough to recover queries-to-accuracy
    exactly for any threshold.
    """

    def __init__(self, objective, budget: int | None = None):
        if budget is not None and budget <= 0:
            raise ValueError("budget must be positive or None")
        self.objective = objective
        self.budget = budget
        self.count = 0
        self.best_point = None
        self.best_value = None
        self.improvements: list[tuple[int, float]] = []

    @property
    def remaining(self) -> float:
        if self.budget is None:
            return math.inf
        return self.budget - self.count

    def evaluate(self, x) -> float:
        if self.budget is not None and self.count >= self.budget:
            raise BudgetExhausted(
                f"query budget of {self.budget} evaluations exhausted"
            )
        if len(x) != self.objective.dim:
            raise DimensionMismatch(
                f"point has length {len(x)}, objective dim is {self.objective.dim}"
            )
        # Overflow to +-inf/NaN is an expected outcome far from the start
        # point; values are returned and counted as-is.
        with np.errstate(over="ignore", invalid="ignore"):
            value = self.objective.func(x)
        self.count += 1
        if self.best_value is None or is_better(value, self.best_value):
            self.best_value = value
            self.best_point = np.array(x, copy=True)
            self.improvements.append((self.count, value))
        return value

    def best_seen(self):
        if self.count == 0:
            raise NoQueriesYet("no evaluations served yet")
        return np.array(self.best_point, copy=True), self.best_value
