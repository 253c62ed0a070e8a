"""Test-problem library: a random convex quartic generator, a subset of the
classic More-Garbow-Hillstrom sum-of-squares collection, and simple quadratics
used by diagnostics. All problems expose a recommended start ``x0`` and the
known optimal value ``f_star``.

The collection problems follow the standard residual definitions. Most entries
attain ``f_star = 0`` (sums of squares with a known root); the data-fitting
entries without a root carry the published optimal values instead.
Objective values may overflow to +inf far from the start; callers treat
non-finite values as worse than any finite value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np


class UnknownProblem(KeyError):
    """Raised when a problem name is not in the registry."""


@dataclass(frozen=True)
class Problem:
    name: str
    dim: int
    func: Callable[[np.ndarray], float]
    x0: np.ndarray
    f_star: float | None
    x_star: np.ndarray | None = None
    diagnostics: dict = field(default_factory=dict)
    # picklable recipe for rebuilding the problem in a worker process; see
    # from_spec. None means the problem cannot cross process boundaries.
    spec: tuple | None = None


def _sumsq(residuals) -> float:
    r = np.asarray(residuals, dtype=float)
    return float(r @ r)


# ---------------------------------------------------------------------------
# random convex quartic: a * sum(x_i^4) + 0.5 x'Ax + b * ||x||^2, A = G'G
# ---------------------------------------------------------------------------

def make_quartic(d: int, alpha: float = 0.1, beta: float = 0.01,
                 seed: int = 0) -> Problem:
    """Strongly convex quartic with minimum 0 at the origin."""
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((d, d))
    A = G.T @ G

    def func(x):
        x = np.asarray(x, dtype=float)
        return float(alpha * np.sum(x**4) + 0.5 * x @ (A @ x) + beta * x @ x)

    eigs = np.linalg.eigvalsh(A)
    # Start where the quartic term dominates; close-in starts sit in the
    # ill-conditioned quadratic basin (lambda_min(A) is near zero) and make
    # relative targets disproportionately hard.
    return Problem(
        name=f"quartic-d{d}",
        dim=d,
        func=func,
        x0=np.full(d, 10.0),
        f_star=0.0,
        x_star=np.zeros(d),
        diagnostics={"A": A, "alpha": alpha, "beta": beta,
                     "mu": float(eigs[0] + 2 * beta)},
        spec=("quartic", d, alpha, beta, seed),
    )


def make_quadratic(d: int, cond: float = 10.0, seed: int = 0,
                   name: str | None = None) -> Problem:
    """Diagonal strongly convex quadratic 0.5 x'Dx with condition number ``cond``."""
    lam = np.geomspace(1.0, cond, d)

    def func(x):
        x = np.asarray(x, dtype=float)
        return float(0.5 * (lam * x) @ x)

    rng = np.random.default_rng(seed)
    x0 = rng.standard_normal(d) * 2.0
    return Problem(
        name=name or f"quadratic-d{d}",
        dim=d,
        func=func,
        x0=x0,
        f_star=0.0,
        x_star=np.zeros(d),
        diagnostics={"H": np.diag(lam), "mu": 1.0, "L": float(cond)},
        spec=("quadratic", d, cond, seed, name),
    )


# ---------------------------------------------------------------------------
# More-Garbow-Hillstrom subset (standard residual formulations)
# ---------------------------------------------------------------------------

def _rosenbrock(x):
    return _sumsq([10.0 * (x[1] - x[0] ** 2), 1.0 - x[0]])


def _freudenstein_roth(x):
    x1, x2 = x
    f1 = -13.0 + x1 + ((5.0 - x2) * x2 - 2.0) * x2
    f2 = -29.0 + x1 + ((x2 + 1.0) * x2 - 14.0) * x2
    return _sumsq([f1, f2])


def _powell_badly_scaled(x):
    with np.errstate(over="ignore"):
        f1 = 1e4 * x[0] * x[1] - 1.0
        f2 = float(np.exp(-x[0]) + np.exp(-x[1])) - 1.0001
        return _sumsq([f1, f2])


def _brown_badly_scaled(x):
    return _sumsq([x[0] - 1e6, x[1] - 2e-6, x[0] * x[1] - 2.0])


def _beale(x):
    x1, x2 = x
    y = (1.5, 2.25, 2.625)
    return _sumsq([y[i] - x1 * (1.0 - x2 ** (i + 1)) for i in range(3)])


def _helical_valley(x):
    x1, x2, x3 = x
    if x1 > 0:
        theta = math.atan(x2 / x1) / (2.0 * math.pi)
    elif x1 < 0:
        theta = math.atan(x2 / x1) / (2.0 * math.pi) + 0.5
    else:
        theta = 0.25 if x2 >= 0 else -0.25
    return _sumsq([
        10.0 * (x3 - 10.0 * theta),
        10.0 * (math.hypot(x1, x2) - 1.0),
        x3,
    ])


def _powell_singular(x):
    x1, x2, x3, x4 = x
    return _sumsq([
        x1 + 10.0 * x2,
        math.sqrt(5.0) * (x3 - x4),
        (x2 - 2.0 * x3) ** 2,
        math.sqrt(10.0) * (x1 - x4) ** 2,
    ])


def _wood(x):
    x1, x2, x3, x4 = x
    return _sumsq([
        10.0 * (x2 - x1**2),
        1.0 - x1,
        math.sqrt(90.0) * (x4 - x3**2),
        1.0 - x3,
        math.sqrt(10.0) * (x2 + x4 - 2.0),
        (x2 - x4) / math.sqrt(10.0),
    ])


def _extended_rosenbrock(x):
    x = np.asarray(x, dtype=float)
    odd = x[0::2]
    even = x[1::2]
    r = np.empty(x.size)
    r[0::2] = 10.0 * (even - odd**2)
    r[1::2] = 1.0 - odd
    return _sumsq(r)


def _extended_powell_singular(x):
    x = np.asarray(x, dtype=float)
    a, b, c, d = x[0::4], x[1::4], x[2::4], x[3::4]
    r = np.empty(x.size)
    r[0::4] = a + 10.0 * b
    r[1::4] = math.sqrt(5.0) * (c - d)
    r[2::4] = (b - 2.0 * c) ** 2
    r[3::4] = math.sqrt(10.0) * (a - d) ** 2
    return _sumsq(r)


def _trigonometric(x):
    x = np.asarray(x, dtype=float)
    n = x.size
    cos_sum = np.sum(np.cos(x))
    i = np.arange(1, n + 1)
    r = n - cos_sum + i * (1.0 - np.cos(x)) - np.sin(x)
    return _sumsq(r)


def _box_3d(x):
    x1, x2, x3 = x
    t = np.arange(1, 11) * 0.1
    with np.errstate(over="ignore"):
        r = np.exp(-t * x1) - np.exp(-t * x2) - x3 * (np.exp(-t) - np.exp(-10.0 * t))
        return _sumsq(r)


def _biggs_exp6(x):
    x1, x2, x3, x4, x5, x6 = x
    t = np.arange(1, 14) * 0.1
    y = np.exp(-t) - 5.0 * np.exp(-10.0 * t) + 3.0 * np.exp(-4.0 * t)
    with np.errstate(over="ignore"):
        r = x3 * np.exp(-t * x1) - x4 * np.exp(-t * x2) + x6 * np.exp(-t * x5) - y
        return _sumsq(r)


_GAUSSIAN_Y = np.array([
    0.0009, 0.0044, 0.0175, 0.0540, 0.1295, 0.2420, 0.3521, 0.3989,
    0.3521, 0.2420, 0.1295, 0.0540, 0.0175, 0.0044, 0.0009,
])


def _gaussian_fit(x):
    x1, x2, x3 = x
    t = (8.0 - np.arange(1, 16)) / 2.0
    with np.errstate(over="ignore"):
        r = x1 * np.exp(-x2 * (t - x3) ** 2 / 2.0) - _GAUSSIAN_Y
        return _sumsq(r)


def _brown_dennis(x):
    x1, x2, x3, x4 = x
    t = np.arange(1, 21) / 5.0
    with np.errstate(over="ignore"):
        r = (x1 + t * x2 - np.exp(t)) ** 2 + (x3 + x4 * np.sin(t) - np.cos(t)) ** 2
        return _sumsq(r)


def _broyden_tridiagonal(x):
    x = np.asarray(x, dtype=float)
    xm = np.concatenate([[0.0], x[:-1]])
    xp = np.concatenate([x[1:], [0.0]])
    return _sumsq((3.0 - 2.0 * x) * x - xm - 2.0 * xp + 1.0)


def _discrete_boundary_value(x):
    x = np.asarray(x, dtype=float)
    n = x.size
    h = 1.0 / (n + 1)
    t = np.arange(1, n + 1) * h
    xm = np.concatenate([[0.0], x[:-1]])
    xp = np.concatenate([x[1:], [0.0]])
    return _sumsq(2.0 * x - xm - xp + h * h * (x + t + 1.0) ** 3 / 2.0)


def _discrete_integral_equation(x):
    x = np.asarray(x, dtype=float)
    n = x.size
    h = 1.0 / (n + 1)
    t = np.arange(1, n + 1) * h
    y = (x + t + 1.0) ** 3
    ty = t * y
    uy = (1.0 - t) * y
    # r_i = x_i + h[(1-t_i) sum_{j<=i} t_j y_j + t_i sum_{j>i} (1-t_j) y_j]/2
    lower = np.cumsum(ty)
    upper = np.concatenate([np.cumsum(uy[::-1])[::-1][1:], [0.0]])
    return _sumsq(x + h * ((1.0 - t) * lower + t * upper) / 2.0)


def _brown_almost_linear(x):
    x = np.asarray(x, dtype=float)
    n = x.size
    r = x + np.sum(x) - (n + 1.0)
    r[-1] = np.prod(x) - 1.0
    return _sumsq(r)


def _variably_dimensioned(x):
    x = np.asarray(x, dtype=float)
    j = np.arange(1, x.size + 1)
    s = float(j @ (x - 1.0))
    return _sumsq(np.concatenate([x - 1.0, [s, s * s]]))


def _mgh_entries():
    from dataclasses import replace

    ext_rosen_x0 = np.tile([-1.2, 1.0], 5)
    ext_powell_x0 = np.tile([3.0, -1.0, 0.0, 1.0], 3)
    n_vd = 10
    t10 = np.arange(1, 11) / 11.0
    entries = [
        Problem("rosenbrock", 2, _rosenbrock, np.array([-1.2, 1.0]), 0.0,
                np.array([1.0, 1.0])),
        Problem("freudenstein-roth", 2, _freudenstein_roth,
                np.array([0.5, -2.0]), 0.0, np.array([5.0, 4.0])),
        Problem("powell-badly-scaled", 2, _powell_badly_scaled,
                np.array([0.0, 1.0]), 0.0),
        Problem("brown-badly-scaled", 2, _brown_badly_scaled,
                np.array([1.0, 1.0]), 0.0, np.array([1e6, 2e-6])),
        Problem("beale", 2, _beale, np.array([1.0, 1.0]), 0.0,
                np.array([3.0, 0.5])),
        Problem("helical-valley", 3, _helical_valley,
                np.array([-1.0, 0.0, 0.0]), 0.0, np.array([1.0, 0.0, 0.0])),
        Problem("powell-singular", 4, _powell_singular,
                np.array([3.0, -1.0, 0.0, 1.0]), 0.0, np.zeros(4)),
        Problem("wood", 4, _wood, np.array([-3.0, -1.0, -3.0, -1.0]), 0.0,
                np.ones(4)),
        Problem("extended-rosenbrock", 10, _extended_rosenbrock,
                ext_rosen_x0, 0.0, np.ones(10)),
        Problem("extended-powell-singular", 12, _extended_powell_singular,
                ext_powell_x0, 0.0, np.zeros(12)),
        Problem("trigonometric", 10, _trigonometric,
                np.full(10, 1.0 / 10.0), 0.0),
        Problem("variably-dimensioned", n_vd, _variably_dimensioned,
                1.0 - np.arange(1, n_vd + 1) / n_vd, 0.0, np.ones(n_vd)),
        Problem("broyden-tridiagonal", 10, _broyden_tridiagonal,
                -np.ones(10), 0.0),
        Problem("discrete-boundary-value", 10, _discrete_boundary_value,
                t10 * (t10 - 1.0), 0.0),
        Problem("discrete-integral-equation", 10, _discrete_integral_equation,
                t10 * (t10 - 1.0), 0.0),
        Problem("brown-almost-linear", 10, _brown_almost_linear,
                np.full(10, 0.5), 0.0, np.ones(10)),
        Problem("box-3d", 3, _box_3d, np.array([0.0, 10.0, 20.0]), 0.0,
                np.array([1.0, 10.0, 1.0])),
        Problem("biggs-exp6", 6, _biggs_exp6,
                np.array([1.0, 2.0, 1.0, 1.0, 1.0, 1.0]), 0.0,
                np.array([1.0, 10.0, 1.0, 5.0, 4.0, 3.0])),
        # published optimum of the 15-point bell-curve fit
        Problem("gaussian-fit", 3, _gaussian_fit,
                np.array([0.4, 1.0, 0.0]), 1.12793e-8),
        # published optimum of the 20-point fit
        Problem("brown-dennis", 4, _brown_dennis,
                np.array([25.0, 5.0, -5.0, -1.0]), 85822.20162635627),
    ]
    return [replace(p, spec=("name", p.name)) for p in entries]


def mgh_suite() -> list[Problem]:
    """The benchmark subset: 20 collection problems, dimensions 2 to 12."""
    return _mgh_entries()


def from_spec(spec: tuple) -> Problem:
    """Rebuild a problem from its picklable recipe (Problem.spec)."""
    kind = spec[0]
    if kind == "name":
        return lookup(spec[1])
    if kind == "quartic":
        _, d, alpha, beta, seed = spec
        return make_quartic(d, alpha, beta, seed)
    if kind == "quadratic":
        _, d, cond, seed, name = spec
        return make_quadratic(d, cond, seed, name)
    raise ValueError(f"unknown problem spec {spec!r}")


def _registry() -> dict[str, Problem]:
    reg = {p.name: p for p in _mgh_entries()}
    reg["quartic-d30"] = make_quartic(30)
    reg["quadratic-d10"] = make_quadratic(10)
    return reg


def problem_names() -> list[str]:
    return sorted(_registry())


def lookup(name: str) -> Problem:
    reg = _registry()
    if name not in reg:
        raise UnknownProblem(
            f"unknown problem {name!r}; known: {', '.join(sorted(reg))}"
        )
    return reg[name]
