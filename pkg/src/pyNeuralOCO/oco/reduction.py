"""
Online nearly-convex optimization by linearization.

Each round the learner plays θ_t, queries the loss oracle, forms
h_t(θ) = ℓ_t(θ_t) + ∇ℓ_t(θ_t)ᵀ(θ - θ_t) and feeds ∇h_t = ∇ℓ_t(θ_t) to the inner
algorithm. The inner algorithm therefore only ever sees linear losses.
"""

from __future__ import annotations

import logging
from typing import Callable, Iterable, List

import numpy as np

from ..core.errors import NumericalAbortError, OracleFailureError, RunAbortedError
from .algorithms import step
from .types import LossEvent, LossOracle, OcoAlgorithmState, RegretTrace, as_oracle_output

logger = logging.getLogger(__name__)


def linearize(value: float, grad: np.ndarray, theta_t: np.ndarray) -> Callable[[np.ndarray], float]:
    """The linear surrogate h_t; h_t(θ_t) equals the realized loss exactly."""

    def surrogate(theta: np.ndarray) -> float:
        return float(value + np.vdot(grad, np.asarray(theta) - theta_t))

    return surrogate


def run_nearly_convex(state: OcoAlgorithmState, loss_stream: Iterable[LossOracle],
                      keep_events: bool = True) -> RegretTrace:
    """Play the stream and return the learner's trace; the comparator column is left empty."""
    losses: List[float] = []
    events: List[LossEvent] = []

    def partial() -> RegretTrace:
        return RegretTrace(np.array(losses), events=tuple(events), final_state=state)

    logger.info("Starting %s run from round %d (eta0=%g)", state.algorithm, state.t, state.eta0)
    for oracle in loss_stream:
        round_index = state.t
        theta_t = state.iterate
        try:
            output = as_oracle_output(oracle(theta_t))
        except RunAbortedError as exc:
            raise NumericalAbortError(str(exc), round_index=round_index, trace=partial()) from exc
        except Exception as exc:
            raise OracleFailureError(f"loss oracle failed: {exc}", round_index=round_index, trace=partial()) from exc

        value = float(output.value)
        grad = np.asarray(output.grad, dtype=float)
        if not np.isfinite(value) or not np.all(np.isfinite(grad)):
            raise NumericalAbortError("non-finite loss or gradient", round_index=round_index, trace=partial())

        surrogate = linearize(value, grad, theta_t)
        if keep_events:
            events.append(LossEvent(round_index, value, grad, surrogate(theta_t), output.x, output.output_grad))
        losses.append(value)
        try:
            state = step(state, grad)
        except NumericalAbortError as exc:
            raise NumericalAbortError(str(exc), round_index=round_index,
                                      trace=partial().truncated(len(losses) - 1)) from exc
        logger.debug("round %d: loss=%.6g", round_index, value)

    logger.info("Finished after %d rounds, cumulative loss %.6g", len(losses), float(np.sum(losses)))
    return RegretTrace(np.array(losses), events=tuple(events), final_state=state)
