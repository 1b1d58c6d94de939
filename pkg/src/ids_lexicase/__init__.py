"""Lexicase parent selection with random and informed down-sampling,
a compact plushy/stack-machine GP engine, benchmark problem generators,
and a budget-accounted experiment harness."""

from .core import (
    CaseDistanceMatrix,
    CaseOrigin,
    CaseRole,
    CaseSet,
    DownSample,
    SolveMatrix,
    TrainingCase,
    compute_case_distances,
    hamming_distance,
)
from .experiment import (
    ExperimentConfig,
    ExperimentSummary,
    RunOutcome,
    RunRecord,
    generation_limit,
    run_evolution,
    run_experiment,
)
from .problems import PROBLEMS, generate_case_sets, get_problem, oracle_eval
from .selection import (
    StrategyConfig,
    StrategyKind,
    farthest_first_downsample,
    informed_downsample_sparse,
    lexicase_select,
    random_downsample,
    selection_probability_oracle,
)
from .stats import bonferroni_holm, two_proportion_z_test
from .vm import Individual, evaluate_population, execute, random_plushy, umad

__all__ = [
    "CaseDistanceMatrix", "CaseOrigin", "CaseRole", "CaseSet", "DownSample",
    "SolveMatrix", "TrainingCase", "compute_case_distances", "hamming_distance",
    "ExperimentConfig", "ExperimentSummary", "RunOutcome", "RunRecord",
    "generation_limit", "run_evolution", "run_experiment",
    "PROBLEMS", "generate_case_sets", "get_problem", "oracle_eval",
    "StrategyConfig", "StrategyKind", "farthest_first_downsample",
    "informed_downsample_sparse", "lexicase_select", "random_downsample",
    "selection_probability_oracle",
    "bonferroni_holm", "two_proportion_z_test",
    "Individual", "evaluate_population", "execute", "random_plushy", "umad",
]
