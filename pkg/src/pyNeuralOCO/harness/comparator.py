"""
Offline comparators: the best fixed decision in hindsight, approximated.

The authoritative comparator is projected full-gradient descent on the summed
recorded losses over the decision set, with the step halved on non-decrease and
doubled after each accepted step. Its result is an approximate argmin and is
labeled as such. An unconstrained L-BFGS-B solve is available as a diagnostic.
"""

from __future__ import annotations

import logging
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, TypedDict

import numpy as np
import scipy.optimize as opt

from ..core.ball import BallSet
from ..core.errors import ShapeMismatchError
from ..neural.two_layer import TwoLayerParams
from ..rf.teacher import RfTeacher

logger = logging.getLogger(__name__)

COMPARATOR_KINDS = ("offline_gd_oracle", "constructive_theta_star", "rf_teacher_loss", "zero_policy", "closed_form")
DEFAULT_BUDGET = 200
APPROXIMATE_LABEL = "approximate argmin"

Objective = Callable[[np.ndarray], Tuple[float, np.ndarray]]


class ComparatorResult(TypedDict):
    """Comparator losses per round and how they were obtained."""

    kind: str
    label: str
    theta: Optional[np.ndarray]
    per_round: np.ndarray
    cum_loss: np.ndarray
    iterations: int
    final_grad_norm: float
    converged: bool
    budget: int


def _result(kind: str, theta, per_round, iterations: int = 0, grad_norm: float = 0.0, converged: bool = True,
            budget: int = 0, label: str = "exact") -> ComparatorResult:
    per_round = np.asarray(per_round, dtype=float).reshape(-1)
    return {
        "kind": kind,
        "label": label,
        "theta": None if theta is None else np.asarray(theta),
        "per_round": per_round,
        "cum_loss": np.cumsum(per_round),
        "iterations": int(iterations),
        "final_grad_norm": float(grad_norm),
        "converged": bool(converged),
        "budget": int(budget),
    }


def projected_descent(objective: Objective, theta1: np.ndarray, decision_set: BallSet, budget: int = DEFAULT_BUDGET,
                      tol: float = 1e-10) -> Tuple[np.ndarray, float, int, float, bool]:
    """Minimize over the set; returns (θ, value, evaluations, gradient-mapping norm, converged).

    ``budget`` counts objective evaluations, one pass over the recorded stream each.
    """
    theta = decision_set.project(theta1)
    value, grad = objective(theta)
    evaluations = 1
    grad_norm = float(np.linalg.norm(grad))
    scale = decision_set.radius if np.isfinite(decision_set.radius) else max(1.0, float(np.linalg.norm(theta)))
    step = scale / grad_norm if grad_norm > 0 else 1.0
    mapping_norm = grad_norm
    while evaluations < budget:
        candidate = decision_set.project(theta - step * grad)
        displacement = float(np.linalg.norm((candidate - theta).ravel()))
        mapping_norm = displacement / step
        if mapping_norm <= tol * max(1.0, abs(value)) or displacement == 0.0:
            return theta, value, evaluations, mapping_norm, True
        candidate_value, candidate_grad = objective(candidate)
        evaluations += 1
        if candidate_value < value:
            theta, value, grad = candidate, candidate_value, candidate_grad
            step *= 2.0
        else:
            step *= 0.5
    return theta, value, evaluations, mapping_norm, False


def offline_comparator(objective: Objective, per_round: Callable[[np.ndarray], np.ndarray], theta1: np.ndarray,
                       decision_set: BallSet, budget: int = DEFAULT_BUDGET) -> ComparatorResult:
    """Approximate best fixed θ in the set for the summed recorded losses."""
    theta, value, evaluations, mapping_norm, converged = projected_descent(objective, theta1, decision_set, budget)
    if not converged:
        logger.warning("Offline comparator used its budget of %d passes without reaching stationarity "
                       "(gradient mapping %.3g)", budget, mapping_norm)
    logger.info("Offline comparator: total loss %.6g after %d passes", value, evaluations)
    return _result("offline_gd_oracle", theta, per_round(theta), evaluations, mapping_norm, converged, budget,
                   APPROXIMATE_LABEL)


def budget_sweep(objective: Objective, theta1: np.ndarray, decision_set: BallSet,
                 budgets: Sequence[int] = (25, 50, 100, 200)) -> Dict[str, Any]:
    """Best total loss per budget; it should not increase as the budget grows."""
    totals: List[float] = [projected_descent(objective, theta1, decision_set, budget)[1] for budget in budgets]
    monotone = all(later <= earlier + 1e-12 * max(1.0, abs(earlier)) for earlier, later in zip(totals, totals[1:]))
    if not monotone:
        logger.warning("Comparator loss increased with budget: %s", totals)
    return {"budgets": list(budgets), "totals": totals, "monotone": bool(monotone)}


def unconstrained_diagnostic(objective: Objective, theta1: np.ndarray, budget: int = DEFAULT_BUDGET) -> Dict[str, Any]:
    """Best loss found without the set constraint; diagnostic only."""
    shape = np.shape(theta1)

    def flat(vector: np.ndarray) -> Tuple[float, np.ndarray]:
        value, grad = objective(vector.reshape(shape))
        return value, np.asarray(grad, dtype=float).ravel()

    result = opt.minimize(flat, np.asarray(theta1, dtype=float).ravel(), jac=True, method="L-BFGS-B",
                          options={"maxiter": budget})
    return {
        "label": "unconstrained diagnostic",
        "total_loss": float(result.fun),
        "distance_from_init": float(np.linalg.norm(result.x - np.asarray(theta1).ravel())),
        "iterations": int(result.nit),
        "success": bool(result.success),
    }


def constructive_theta_star(teacher: RfTeacher, params: TwoLayerParams) -> np.ndarray:
    """θ*[r] = θ₁[r] + (b/2) c_r a_r and θ̄*[r] = θ̄₁[r] - (b/2) c_r a_r.

    The teacher's features must be the student's initial rows.
    """
    half = params.m // 2
    if (teacher.d, teacher.m_rf, teacher.p) != (params.d, half, params.p):
        raise ShapeMismatchError(
            f"Teacher (d={teacher.d}, m_rf={teacher.m_rf}, p={teacher.p}) does not match student "
            f"(d={params.d}, m/2={half}, p={params.p})"
        )
    if teacher.activation.tag != params.activation.tag:
        raise ValueError(f"Teacher activation '{teacher.activation.tag}' differs from '{params.activation.tag}'")
    if not np.array_equal(teacher.w, params.theta1[:, :half, :]):
        raise ValueError("Teacher features must equal the student's initial rows")
    shift = 0.5 * params.b * teacher.c * params.a[:, :, None]
    theta = np.array(params.theta1, dtype=float)
    theta[:, :half, :] += shift
    theta[:, half:, :] -= shift
    return theta


def fixed_comparator(kind: str, theta, per_round) -> ComparatorResult:
    """Comparator given directly by a fixed θ (or fixed predictions) rather than a search."""
    if kind not in COMPARATOR_KINDS:
        raise ValueError(f"Unknown comparator '{kind}', expected one of {COMPARATOR_KINDS}")
    return _result(kind, theta, per_round)
