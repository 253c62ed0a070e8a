import numpy as np
import pytest

from carsopt.baselines import (NesterovConfig, SpsaConfig, StpConfig,
                               run_nesterov_spokoiny, run_spsa, run_stp)
from carsopt.oracle import CountingOracle
from carsopt.problems import make_quadratic
from carsopt.runs import StopRule


QUERIES_PER_ITER = {
    run_stp: (StpConfig, 2),
    run_nesterov_spokoiny: (NesterovConfig, 2),
    run_spsa: (SpsaConfig, 3),
}


@pytest.mark.parametrize("runner", QUERIES_PER_ITER)
def test_query_accounting(runner):
    config_cls, per_iter = QUERIES_PER_ITER[runner]
    problem = make_quadratic(6)
    oracle = CountingOracle(problem)
    result = runner(problem, config_cls(), oracle, StopRule(max_iters=100))
    assert result.iterations == 100
    assert oracle.count == 1 + 100 * per_iter


def test_stp_is_monotone():
    problem = make_quadratic(6, cond=20.0, seed=1)
    oracle = CountingOracle(problem, budget=2000)
    result = run_stp(problem, StpConfig(), oracle, seed=3)
    assert np.all(np.diff(result.fx_history) <= 0)


def test_stp_default_schedule():
    config = StpConfig()
    assert config.step_schedule(0) == 1.0
    assert config.step_schedule(3) == pytest.approx(0.5)


def test_spsa_gain_sequences():
    config = SpsaConfig()
    assert config.a_k(0) == pytest.approx(0.16 / 101.0 ** 0.602)
    assert config.c_k(0) == pytest.approx(1e-4)
    assert config.c_k(999) == pytest.approx(1e-4 / 1000.0 ** 0.101)
    # both gains decay
    assert config.a_k(500) < config.a_k(0)
    assert config.c_k(500) < config.c_k(0)


def test_nesterov_default_step_size_depends_on_dimension():
    # alpha=None resolves to 1/(4(d+4)) at run time; passing that value
    # explicitly must reproduce the same trajectory.
    problem = make_quadratic(6, seed=2)
    runs = []
    for alpha in (None, 1.0 / (4.0 * (6 + 4))):
        oracle = CountingOracle(problem)
        runs.append(run_nesterov_spokoiny(
            problem, NesterovConfig(alpha=alpha), oracle,
            StopRule(max_iters=50), seed=9,
        ))
    np.testing.assert_array_equal(runs[0].x_final, runs[1].x_final)


@pytest.mark.parametrize("runner", QUERIES_PER_ITER)
def test_progress_on_easy_quadratic(runner):
    config_cls, _ = QUERIES_PER_ITER[runner]
    problem = make_quadratic(4, cond=3.0, seed=5)
    oracle = CountingOracle(problem, budget=6000)
    runner(problem, config_cls(), oracle, seed=1)
    f0 = problem.func(problem.x0)
    assert oracle.best_value < 0.05 * f0


@pytest.mark.parametrize("runner", QUERIES_PER_ITER)
def test_seed_reproducibility(runner):
    config_cls, _ = QUERIES_PER_ITER[runner]
    problem = make_quadratic(5, seed=0)
    finals = []
    for _ in range(2):
        oracle = CountingOracle(problem, budget=500)
        finals.append(runner(problem, config_cls(), oracle, seed=7).x_final)
    np.testing.assert_array_equal(finals[0], finals[1])


def test_budget_respected():
    problem = make_quadratic(5)
    for runner, (config_cls, _) in QUERIES_PER_ITER.items():
        oracle = CountingOracle(problem, budget=101)
        runner(problem, config_cls(), oracle)
        assert oracle.count <= 101
