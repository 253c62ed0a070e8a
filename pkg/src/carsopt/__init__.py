"""Curvature-aware random search, zeroth-order baselines, and a benchmark
harness with queries-to-accuracy accounting and performance profiles."""

from .baselines import (NesterovConfig, SpsaConfig, StpConfig,
                        run_nesterov_spokoiny, run_spsa, run_stp)
from .bench import (ProfileTable, RunRecord, performance_profile,
                    performance_ratios, run_grid, run_single,
                    solved_query_count)
from .cars import (CarsConfig, CarsState, Decreasing, FixedLimit,
                   HolderConstants, cars_candidate, cars_step,
                   central_differences, radius_limit, run_cars)
from .cars_cr import (CarsCrConfig, RhoSchedule, adaptive_L_hat,
                      cr_step, cubic_minimizer_phi, run_cars_cr)
from .oracle import (BudgetExhausted, CountingOracle, DimensionMismatch,
                     NoQueriesYet, Objective)
from .problems import (Problem, UnknownProblem, lookup, make_quadratic,
                       make_quartic, mgh_suite)
from .runs import SolveResult, StopRule
from .sampling import (DirectionSampler, estimate_eta, estimate_p_gamma,
                       sample_averaged_gradient_direction, sample_direction)

__all__ = [name for name in dir() if not name.startswith("_")]
