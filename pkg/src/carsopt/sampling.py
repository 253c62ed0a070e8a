"""Search-direction samplers and Monte-Carlo distribution diagnostics.

Direction kinds:

* ``sphere``      -- uniform on the unit sphere
* ``gaussian``    -- standard normal entries
* ``coordinate``  -- a canonical basis vector, chosen uniformly
* ``rademacher``  -- independent +-1 entries
* ``averaged``    -- finite-difference surrogate of an averaged gradient
  direction (see :func:`sample_averaged_gradient_direction`)
* ``fixed``       -- always returns a user-supplied vector (diagnostics only)

Seeding: samplers accept anything ``numpy.random.default_rng`` accepts.
Independent runs derive child seeds with :func:`child_seed`, which mixes the
master seed with a stable hash of the run labels, so parallel runs are
reproducible and uncorrelated regardless of execution order.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

KINDS = ("sphere", "gaussian", "coordinate", "rademacher", "averaged", "fixed")


class ZeroGradient(ValueError):
    """Raised when a diagnostic requires a nonzero gradient vector."""


class SingularH(ValueError):
    """Raised when the supplied curvature matrix is not invertible."""


def child_seed(master_seed: int, *labels) -> np.random.SeedSequence:
    """Deterministic seed-splitting rule for independent runs.

    The labels (strings or integers identifying the run) are hashed into a
    64-bit word that is mixed into the entropy pool together with the master
    seed. The same (master seed, labels) pair always yields the same stream.
    """
    digest = hashlib.blake2s(
        "|".join(str(x) for x in labels).encode(), digest_size=8
    ).digest()
    return np.random.SeedSequence([int(master_seed), int.from_bytes(digest, "little")])


@dataclass(frozen=True)
class DistributionDiagnostics:
    """Monte-Carlo estimates of the sampling-distribution quality measures."""

    eta_estimate: float
    p_gamma_estimate: float
    sample_count: int


class DirectionSampler:
    """Seeded generator of search directions of one of the kinds above."""

    def __init__(self, kind: str, dim: int, seed=0, m: int = 1, direction=None):
        if kind not in KINDS:
            raise ValueError(f"unknown sampler kind {kind!r}; choose from {KINDS}")
        if dim < 1:
            raise ValueError("dim must be >= 1")
        if kind == "averaged" and m < 1:
            raise ValueError("averaged sampler needs m >= 1")
        if kind == "fixed":
            if direction is None:
                raise ValueError("fixed sampler needs a direction")
            direction = np.asarray(direction, dtype=float)
            if direction.shape != (dim,):
                raise ValueError("direction must have shape (dim,)")
        self.kind = kind
        self.dim = dim
        self.m = m
        self.direction = direction
        self.rng = np.random.default_rng(seed)

    def sample_batch(self, n: int) -> np.ndarray:
        """Draw ``n`` directions as an (n, dim) array, advancing the stream."""
        d = self.dim
        if self.kind == "gaussian":
            return self.rng.standard_normal((n, d))
        if self.kind == "sphere":
            v = self.rng.standard_normal((n, d))
            return v / np.linalg.norm(v, axis=1, keepdims=True)
        if self.kind == "coordinate":
            idx = self.rng.integers(d, size=n)
            out = np.zeros((n, d))
            out[np.arange(n), idx] = 1.0
            return out
        if self.kind == "rademacher":
            return 2.0 * self.rng.integers(0, 2, size=(n, d)) - 1.0
        if self.kind == "fixed":
            return np.tile(self.direction, (n, 1))
        raise ValueError(
            "averaged sampler draws through sample_averaged_gradient_direction"
        )

    def sample(self) -> np.ndarray:
        return self.sample_batch(1)[0]


def sample_direction(sampler: DirectionSampler) -> np.ndarray:
    return sampler.sample()


def sample_averaged_gradient_direction(
    sampler: DirectionSampler, oracle, x, r: float, probes=None
) -> np.ndarray:
    """Average of finite-difference directional derivatives times their probes.

    Draws m Gaussian probe vectors v_j, estimates each directional derivative
    with a central difference of half-width ``r`` (2 oracle queries per probe,
    all counted), and returns the mean of the scaled probes. With exact
    directional derivatives the expectation equals the gradient; the
    finite-difference substitute carries an O(r^2) bias per probe.

    ``probes`` overrides the Gaussian draws (testing hook).
    """
    if r <= 0:
        raise ValueError("probe radius must be positive")
    x = np.asarray(x, dtype=float)
    if probes is None:
        probes = sampler.rng.standard_normal((sampler.m, sampler.dim))
    else:
        probes = np.asarray(probes, dtype=float)
    u = np.zeros(sampler.dim)
    for v in probes:
        d_r = (oracle.evaluate(x + r * v) - oracle.evaluate(x - r * v)) / (2.0 * r)
        u += d_r * v
    return u / len(probes)


def p_gamma_samples(sampler: DirectionSampler, g, gamma: float, n: int) -> np.ndarray:
    """Indicator samples of the alignment event |u.g| >= gamma ||u|| ||g||."""
    g = np.asarray(g, dtype=float)
    gnorm = np.linalg.norm(g)
    if gnorm == 0.0:
        raise ZeroGradient("p_gamma is undefined for a zero gradient")
    if not 0.0 < gamma <= 1.0:
        raise ValueError("gamma must lie in (0, 1]")
    u = sampler.sample_batch(n)
    lhs = np.abs(u @ g)
    rhs = gamma * np.linalg.norm(u, axis=1) * gnorm
    return (lhs >= rhs).astype(float)


def estimate_p_gamma(sampler: DirectionSampler, g, gamma: float, n: int) -> float:
    """Monte-Carlo estimate of the probability of a gamma-aligned direction."""
    return float(p_gamma_samples(sampler, g, gamma, n).mean())


def eta_samples(sampler: DirectionSampler, g, H, n: int) -> np.ndarray:
    """Per-sample values of (u.g)^2 / ((u'Hu) (g'H^-1 g))."""
    g = np.asarray(g, dtype=float)
    H = np.asarray(H, dtype=float)
    if np.linalg.norm(g) == 0.0:
        raise ZeroGradient("eta is undefined for a zero gradient")
    try:
        np.linalg.cholesky(H)
        Hinv_g = np.linalg.solve(H, g)
    except np.linalg.LinAlgError as exc:
        raise SingularH("H must be symmetric positive definite") from exc
    denom_g = float(g @ Hinv_g)
    u = sampler.sample_batch(n)
    num = (u @ g) ** 2
    curv = np.einsum("ij,jk,ik->i", u, H, u)
    return num / (curv * denom_g)


def estimate_eta(sampler: DirectionSampler, g, H, n: int) -> float:
    """Monte-Carlo estimate of the distribution quality measure in (0, 1]."""
    return float(eta_samples(sampler, g, H, n).mean())


def distribution_diagnostics(
    sampler: DirectionSampler, g, H, gamma: float, n: int
) -> DistributionDiagnostics:
    return DistributionDiagnostics(
        eta_estimate=estimate_eta(sampler, g, H, n),
        p_gamma_estimate=estimate_p_gamma(sampler, g, gamma, n),
        sample_count=n,
    )
