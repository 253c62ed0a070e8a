import json

import numpy as np
import pytest

from carsopt.bench import (InvalidTargets, ParseError, R_M, RunRecord,
                           _downsample, performance_profile,
                           performance_ratios, read_records, run_grid,
                           run_single, solved_query_count, write_profile_csv,
                           write_records)
from carsopt.problems import lookup, make_quadratic


class TestSolvedQueryCount:
    def test_threshold_is_relative(self):
        improvements = [(1, 100.0), (5, 9.0), (9, 0.5)]
        # f0=100, f_star=0: eps=1e-1 means best <= 10
        assert solved_query_count(improvements, 100.0, 0.0, 1e-1) == 5
        assert solved_query_count(improvements, 100.0, 0.0, 1e-2) == 9

    def test_eps_one_solved_at_first_query(self):
        assert solved_query_count([(1, 100.0)], 100.0, 0.0, 1.0) == 1

    def test_unsolved_returns_none(self):
        assert solved_query_count([(1, 100.0)], 100.0, 0.0, 1e-3) is None

    def test_nonzero_f_star_offset(self):
        improvements = [(1, 12.0), (4, 2.5)]
        # f0 - f_star = 10, threshold = 2 + 0.05 * 10
        assert solved_query_count(improvements, 12.0, 2.0, 5e-2) == 4

    def test_non_finite_improvements_ignored(self):
        improvements = [(1, float("inf")), (2, 1.0)]
        assert solved_query_count(improvements, 100.0, 0.0, 0.5) == 2

    def test_validations(self):
        with pytest.raises(InvalidTargets):
            solved_query_count([], 0.0, 0.0, 0.5)
        with pytest.raises(ValueError):
            solved_query_count([(1, 1.0)], 2.0, 0.0, 0.0)
        with pytest.raises(ValueError):
            solved_query_count([(1, 1.0)], 2.0, 0.0, 1.5)


class TestDownsample:
    def test_keeps_endpoints(self):
        events = [(i, float(-i)) for i in range(1, 100)]
        kept = _downsample(events)
        assert kept[0] == (1, -1.0)
        assert kept[-1] == (99, -99.0)
        assert len(kept) < len(events)

    def test_geometric_spacing(self):
        events = [(i, float(-i)) for i in range(1, 1000)]
        counts = [c for c, _ in _downsample(events)][:-1]
        ratios = np.diff(np.log(counts))
        assert np.all(ratios >= np.log(1.5) - 1e-9)

    def test_small_inputs(self):
        assert _downsample([]) == []
        assert _downsample([(3, 1.0)]) == [(3, 1.0)]


class TestRunSingle:
    def test_record_fields(self):
        problem = make_quadratic(4)
        rec = run_single(problem, "cars", seed=0, budget=2000,
                         eps_list=[1e-1, 1e-3])
        assert rec.problem == problem.name
        assert rec.solver == "cars"
        assert set(rec.queries_to_target) == {1e-1, 1e-3}
        assert rec.trace[0][0] == 1  # first improvement is the start query

    def test_deterministic(self):
        problem = make_quadratic(4)
        a = run_single(problem, "spsa", 3, 1000, [1e-1], master_seed=5)
        b = run_single(problem, "spsa", 3, 1000, [1e-1], master_seed=5)
        assert a == b

    def test_master_seed_changes_run(self):
        problem = make_quadratic(4)
        a = run_single(problem, "cars", 0, 1000, [1e-1], master_seed=0)
        b = run_single(problem, "cars", 0, 1000, [1e-1], master_seed=1)
        assert a.final_best != b.final_best

    def test_parameter_overrides(self):
        problem = make_quadratic(4)
        rec = run_single(problem, "cars", 0, 500, [1e-1],
                         params={"L_hat": 1.0, "r0": 0.25})
        assert rec.solver == "cars"
        with pytest.raises(ValueError, match="unknown parameters"):
            run_single(problem, "cars", 0, 500, [1e-1], params={"bogus": 1})

    def test_unknown_solver(self):
        with pytest.raises(ValueError, match="unknown solver"):
            run_single(make_quadratic(3), "newton", 0, 100, [1e-1])

    def test_theory_radius_override(self):
        problem = make_quadratic(4)
        rec = run_single(problem, "cars", 0, 2000, [1e-1], params={"C": 0.1})
        assert rec.queries_to_target[1e-1] is not None

    def test_stops_early_once_smallest_eps_reached(self):
        problem = make_quadratic(3, cond=2.0)
        rec = run_single(problem, "cars", 0, 100_000, eps_list=[1e-1])
        solved_at = rec.queries_to_target[1e-1]
        assert solved_at is not None
        # the run should have terminated shortly after solving, not burned
        # the whole budget
        assert rec.trace[-1][0] < 10 * solved_at


class TestRunGrid:
    def test_cartesian_coverage_and_ordering(self):
        problems_ = [make_quadratic(3), make_quadratic(4)]
        records = run_grid(problems_, ["cars", "stp"], seeds=[0, 1],
                           budget=300, eps_list=[1e-1])
        keys = [(r.problem, r.solver, r.seed) for r in records]
        assert len(records) == 8
        assert keys == sorted(keys)

    def test_parallel_equals_serial(self):
        problems_ = [lookup("rosenbrock"), lookup("beale")]
        serial = run_grid(problems_, ["cars"], seeds=[0, 1], budget=400,
                          eps_list=[1e-1], jobs=1)
        parallel = run_grid(problems_, ["cars"], seeds=[0, 1], budget=400,
                            eps_list=[1e-1], jobs=2)
        assert serial == parallel


class TestPerformanceRatios:
    def rec(self, problem, solver, seed, t):
        return RunRecord(problem=problem, solver=solver, seed=seed, budget=100,
                         queries_to_target={1e-1: t}, final_best=0.0)

    def test_best_solver_gets_ratio_one(self):
        records = [self.rec("p", "a", 0, 10), self.rec("p", "b", 0, 25)]
        ratios = performance_ratios(records, 1e-1)
        assert ratios[("p", 0)] == {"a": 1.0, "b": 2.5}

    def test_unsolved_gets_sentinel(self):
        records = [self.rec("p", "a", 0, 10), self.rec("p", "b", 0, None)]
        assert performance_ratios(records, 1e-1)[("p", 0)]["b"] == R_M

    def test_nobody_solved(self):
        records = [self.rec("p", "a", 0, None), self.rec("p", "b", 0, None)]
        assert performance_ratios(records, 1e-1)[("p", 0)] == {"a": R_M, "b": R_M}

    def test_seeds_are_separate_instances(self):
        records = [self.rec("p", "a", s, 10 * (s + 1)) for s in range(3)]
        ratios = performance_ratios(records, 1e-1)
        assert set(ratios) == {("p", 0), ("p", 1), ("p", 2)}
        assert all(inst["a"] == 1.0 for inst in ratios.values())


class TestPerformanceProfile:
    def test_tau_grid_validation(self):
        ratios = {("p", 0): {"a": 1.0}}
        for bad in ([], [0.5, 2.0], [2.0, 1.0]):
            with pytest.raises(ValueError):
                performance_profile(ratios, bad)

    def test_fraction_within_tau(self):
        ratios = {
            ("p", 0): {"a": 1.0, "b": 2.0},
            ("q", 0): {"a": 4.0, "b": 1.0},
        }
        table = performance_profile(ratios, [1.0, 2.0, 4.0])
        np.testing.assert_allclose(table.rho["a"], [0.5, 0.5, 1.0])
        np.testing.assert_allclose(table.rho["b"], [0.5, 1.0, 1.0])


class TestSerialization:
    def make_records(self):
        problem = make_quadratic(3)
        return run_grid([problem], ["cars", "stp"], seeds=[0], budget=300,
                        eps_list=[1e-1, 1e-3])

    def test_round_trip(self, tmp_path):
        records = self.make_records()
        path = tmp_path / "records.jsonl"
        write_records(path, records)
        assert read_records(path) == records

    def test_eps_keys_survive_exactly(self, tmp_path):
        records = self.make_records()
        path = tmp_path / "records.jsonl"
        write_records(path, records)
        back = read_records(path)
        assert set(back[0].queries_to_target) == {1e-1, 1e-3}

    def test_parse_error_carries_line_number(self, tmp_path):
        path = tmp_path / "broken.jsonl"
        write_records(path, self.make_records())
        lines = path.read_text().splitlines()
        lines.append('{"version": 1, "problem": "p"}')  # missing fields
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(ParseError, match=f":{len(lines)}:"):
            read_records(path)

    def test_version_mismatch(self, tmp_path):
        path = tmp_path / "old.jsonl"
        path.write_text(json.dumps({"version": 0}) + "\n")
        with pytest.raises(ParseError):
            read_records(path)

    def test_blank_lines_ignored(self, tmp_path):
        records = self.make_records()
        path = tmp_path / "records.jsonl"
        write_records(path, records)
        path.write_text(path.read_text() + "\n\n")
        assert read_records(path) == records

    def test_profile_csv_format(self, tmp_path):
        table = performance_profile(
            {("p", 0): {"a": 1.0, "b": 2.0}}, [1.0, 2.0]
        )
        path = tmp_path / "profile.csv"
        write_profile_csv(path, table)
        lines = path.read_text().splitlines()
        assert lines[0] == "tau,a,b"
        assert lines[1].split(",") == ["1", "1", "0"]
        assert lines[2].split(",") == ["2", "1", "1"]
