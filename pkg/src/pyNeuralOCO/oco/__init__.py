"""Online convex optimization: projected learners, the linearization reduction and regret traces."""

from ..core.ball import BallSet, ball_around, unconstrained
from .algorithms import STEP_RULES, adagrad_step, ogd_regret_bound, ogd_step, step
from .reduction import linearize, run_nearly_convex
from .synthetic import NearlyConvexFamily, quadratic_comparator, quadratic_oracle, quadratic_stream
from .types import (
    ALGORITHMS,
    LossEvent,
    LossOracle,
    OcoAlgorithmState,
    OracleOutput,
    RegretTrace,
    as_oracle_output,
    make_state,
)
from .validation import NearConvexityReport, certify_nearly_convex_1d, verify_nearly_convex


def project(decision_set: BallSet, theta):
    """Euclidean projection onto the decision set."""
    return decision_set.project(theta)


__all__ = [
    "ALGORITHMS",
    "BallSet",
    "ball_around",
    "unconstrained",
    "project",
    "STEP_RULES",
    "adagrad_step",
    "ogd_step",
    "step",
    "ogd_regret_bound",
    "linearize",
    "run_nearly_convex",
    "NearlyConvexFamily",
    "quadratic_comparator",
    "quadratic_oracle",
    "quadratic_stream",
    "LossEvent",
    "LossOracle",
    "OcoAlgorithmState",
    "OracleOutput",
    "RegretTrace",
    "as_oracle_output",
    "make_state",
    "NearConvexityReport",
    "certify_nearly_convex_1d",
    "verify_nearly_convex",
]
