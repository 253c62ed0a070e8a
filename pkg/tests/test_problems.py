import numpy as np
import pytest
from scipy.optimize import minimize

from carsopt.problems import (Problem, UnknownProblem, lookup, make_quadratic,
                              make_quartic, mgh_suite, problem_names)


class TestRegistry:
    def test_suite_size_and_dimensions(self):
        suite = mgh_suite()
        assert len(suite) == 20
        assert all(2 <= p.dim <= 12 for p in suite)
        assert len({p.name for p in suite}) == 20

    def test_lookup_round_trip(self):
        for name in problem_names():
            assert lookup(name).name == name

    def test_unknown_name(self):
        with pytest.raises(UnknownProblem):
            lookup("does-not-exist")

    def test_quartic_registered_with_default_seed(self):
        registered = lookup("quartic-d30")
        fresh = make_quartic(30)
        x = np.linspace(-1, 1, 30)
        assert registered.func(x) == fresh.func(x)

    def test_start_is_not_optimal(self):
        for p in mgh_suite() + [lookup("quartic-d30"), lookup("quadratic-d10")]:
            assert p.func(p.x0) > p.f_star

    def test_known_minimizers_attain_f_star(self):
        for p in mgh_suite():
            if p.x_star is not None:
                assert p.func(p.x_star) == pytest.approx(p.f_star, abs=1e-20)

    def test_recorded_optima_not_beatable_locally(self):
        # A strong local refinement from the recorded minimizer must not find
        # anything meaningfully below f_star.
        for p in mgh_suite():
            if p.x_star is None:
                continue
            res = minimize(p.func, p.x_star, method="Nelder-Mead",
                           options={"xatol": 1e-10, "fatol": 1e-12,
                                    "maxiter": 2000})
            assert res.fun >= p.f_star - 1e-8


class TestStartValues:
    # classic values at the recommended starts
    @pytest.mark.parametrize("name,f0", [
        ("rosenbrock", 24.2),
        ("freudenstein-roth", 400.5),
        ("beale", 14.203125),
        ("powell-singular", 215.0),
        ("wood", 19192.0),
    ])
    def test_classic_start_values(self, name, f0):
        p = lookup(name)
        assert p.func(p.x0) == pytest.approx(f0, rel=1e-12)

    def test_brown_badly_scaled_start(self):
        p = lookup("brown-badly-scaled")
        assert p.func(p.x0) == pytest.approx((1 - 1e6) ** 2 + (1 - 2e-6) ** 2 + 1.0)


class TestQuartic:
    def test_validation(self):
        with pytest.raises(ValueError):
            make_quartic(5, alpha=0.0)
        with pytest.raises(ValueError):
            make_quartic(5, beta=-1.0)

    def test_minimum_at_origin(self):
        p = make_quartic(10, seed=3)
        assert p.func(np.zeros(10)) == 0.0
        assert p.f_star == 0.0

    def test_matrix_is_positive_semidefinite(self):
        p = make_quartic(12, seed=4)
        eigs = np.linalg.eigvalsh(p.diagnostics["A"])
        assert eigs.min() >= -1e-10

    def test_convexity_along_segments(self):
        p = make_quartic(8, seed=5)
        rng = np.random.default_rng(0)
        for _ in range(1000):
            x = rng.standard_normal(8) * 3
            y = rng.standard_normal(8) * 3
            t = rng.uniform()
            assert p.func(t * x + (1 - t) * y) <= (
                t * p.func(x) + (1 - t) * p.func(y) + 1e-9
            )

    def test_strong_convexity_along_random_directions(self):
        # Second difference of the quadratic + quartic parts is at least the
        # 2*beta contributed by the ridge term.
        p = make_quartic(8, beta=0.01, seed=6)
        rng = np.random.default_rng(1)
        for _ in range(200):
            x = rng.standard_normal(8)
            u = rng.standard_normal(8)
            u /= np.linalg.norm(u)
            r = 10 ** rng.uniform(-4, 0)
            h_r = (p.func(x + r * u) - 2 * p.func(x) + p.func(x - r * u)) / r**2
            assert h_r >= 2 * 0.01 - 1e-6

    def test_reproducible_for_fixed_seed(self):
        a = make_quartic(6, seed=9)
        b = make_quartic(6, seed=9)
        x = np.arange(6, dtype=float)
        assert a.func(x) == b.func(x)

    def test_mu_diagnostic(self):
        p = make_quartic(6, beta=0.5, seed=2)
        eigs = np.linalg.eigvalsh(p.diagnostics["A"])
        assert p.diagnostics["mu"] == pytest.approx(eigs[0] + 1.0)


class TestQuadratic:
    def test_condition_number(self):
        p = make_quadratic(5, cond=25.0)
        H = p.diagnostics["H"]
        eigs = np.linalg.eigvalsh(H)
        assert eigs[-1] / eigs[0] == pytest.approx(25.0)

    def test_value(self):
        p = make_quadratic(3, cond=4.0)
        lam = np.diag(p.diagnostics["H"])
        x = np.array([1.0, 2.0, -1.0])
        assert p.func(x) == pytest.approx(0.5 * lam @ x**2)


def test_overflow_far_from_start_is_not_fatal():
    # Badly scaled entries may overflow to +inf; that is a value, not a crash.
    p = lookup("powell-badly-scaled")
    value = p.func(np.array([-1e5, -1e5]))
    assert np.isinf(value) or value > 1e100
