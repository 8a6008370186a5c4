"""
Projected online learners: OGD with η_t = η₀ t^{-1/2} and diagonal AdaGrad.

Every rule returns a new state whose iterate lies in the decision set. Non-finite
gradients abort instead of being clamped.
"""

from __future__ import annotations

import logging
from dataclasses import replace
from typing import Callable, Dict

import numpy as np

from ..core.errors import NumericalAbortError, ShapeMismatchError
from .types import OcoAlgorithmState

logger = logging.getLogger(__name__)

StepRule = Callable[[OcoAlgorithmState, np.ndarray], OcoAlgorithmState]


def _checked_gradient(state: OcoAlgorithmState, grad) -> np.ndarray:
    grad = np.asarray(grad, dtype=float)
    if grad.shape != state.iterate.shape:
        raise ShapeMismatchError(f"Gradient shape {grad.shape} does not match iterate {state.iterate.shape}")
    if not np.all(np.isfinite(grad)):
        raise NumericalAbortError("non-finite gradient entries", round_index=state.t)
    return grad


def ogd_step(state: OcoAlgorithmState, grad) -> OcoAlgorithmState:
    if state.algorithm != "ogd":
        raise ValueError(f"ogd_step called on a '{state.algorithm}' state")
    grad = _checked_gradient(state, grad)
    candidate = state.iterate - state.eta() * grad
    iterate = state.decision_set.project(candidate)
    return replace(state, iterate=iterate, t=state.t + 1)


def adagrad_step(state: OcoAlgorithmState, grad) -> OcoAlgorithmState:
    if state.algorithm != "adagrad":
        raise ValueError(f"adagrad_step called on a '{state.algorithm}' state")
    grad = _checked_gradient(state, grad)
    accumulator = state.accumulator + grad * grad
    candidate = state.iterate - state.eta0 * grad / (np.sqrt(accumulator) + state.eps_div)
    iterate = state.decision_set.project(candidate)
    return replace(state, iterate=iterate, t=state.t + 1, accumulator=accumulator)


STEP_RULES: Dict[str, StepRule] = {
    "ogd": ogd_step,
    "adagrad": adagrad_step,
}


def step(state: OcoAlgorithmState, grad) -> OcoAlgorithmState:
    """Dispatch on the state's algorithm tag."""
    return STEP_RULES[state.algorithm](state, grad)


def ogd_regret_bound(radius: float, grad_bound: float, rounds: int, eps: float = 0.0) -> float:
    """3RG√T + εT for OGD on ε-nearly convex losses."""
    return 3.0 * radius * grad_bound * np.sqrt(rounds) + eps * rounds
