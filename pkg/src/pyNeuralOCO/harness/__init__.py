"""Configuration, experiments, comparators, artifacts and the command line."""

from .comparator import (
    COMPARATOR_KINDS,
    ComparatorResult,
    budget_sweep,
    constructive_theta_star,
    fixed_comparator,
    offline_comparator,
    projected_descent,
    unconstrained_diagnostic,
)
from .config import ExperimentConfig, load_config, parse_config, worker_count
from .experiments import EXPERIMENTS, ExperimentResult, run_experiment
from .invariants import CheckRow, check_row, run_suite
from .runner import RunOutcome, build_metadata, run, run_seeds, write_artifacts
from .trace_io import TRACE_COLUMNS, check_regret_identity, emit_trace, parse_trace, read_trace, trace_from_frame

__all__ = [
    "COMPARATOR_KINDS",
    "ComparatorResult",
    "budget_sweep",
    "constructive_theta_star",
    "fixed_comparator",
    "offline_comparator",
    "projected_descent",
    "unconstrained_diagnostic",
    "ExperimentConfig",
    "load_config",
    "parse_config",
    "worker_count",
    "EXPERIMENTS",
    "ExperimentResult",
    "run_experiment",
    "CheckRow",
    "check_row",
    "run_suite",
    "RunOutcome",
    "build_metadata",
    "run",
    "run_seeds",
    "write_artifacts",
    "TRACE_COLUMNS",
    "check_regret_identity",
    "emit_trace",
    "parse_trace",
    "read_trace",
    "trace_from_frame",
]
