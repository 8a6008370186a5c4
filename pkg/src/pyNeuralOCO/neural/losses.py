"""
Convex outer losses on the network output and the loss oracles built from them.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from ..oco.types import LossOracle, OracleOutput
from .dispatch import NetworkParams, forward, gradient

OutputFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _absolute(f: np.ndarray, y: np.ndarray) -> float:
    return float(np.sum(np.abs(f - y)))


def _absolute_grad(f: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.sign(f - y)


def _euclidean(f: np.ndarray, y: np.ndarray) -> float:
    return float(np.sum(np.linalg.norm(np.atleast_2d(f - y), axis=-1)))


def _euclidean_grad(f: np.ndarray, y: np.ndarray) -> np.ndarray:
    residual = np.asarray(f - y, dtype=float)
    norms = np.linalg.norm(residual, axis=-1, keepdims=True)
    return np.divide(residual, norms, out=np.zeros_like(residual), where=norms > 0)


def _square(f: np.ndarray, y: np.ndarray) -> float:
    return float(0.5 * np.sum((f - y) ** 2))


def _square_grad(f: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.asarray(f - y, dtype=float)


@dataclass(frozen=True)
class OutputLoss:
    """A convex loss of the network output with its declared Lipschitz constant L.

    L bounds the largest coordinate of the output gradient, which is what the
    near-convexity margin uses. For rows of a batch the values are summed.
    """

    tag: str
    lipschitz: float
    value: Callable[[np.ndarray, np.ndarray], float]
    grad: OutputFn


OUTPUT_LOSSES: Dict[str, OutputLoss] = {
    "absolute": OutputLoss("absolute", 1.0, _absolute, _absolute_grad),
    "euclidean": OutputLoss("euclidean", 1.0, _euclidean, _euclidean_grad),
    "square": OutputLoss("square", np.inf, _square, _square_grad),
}


def get_output_loss(tag: str, lipschitz: Optional[float] = None) -> OutputLoss:
    """Look up a loss; the square loss is only Lipschitz on bounded outputs, so it must declare L."""
    try:
        loss = OUTPUT_LOSSES[tag]
    except KeyError:
        raise ValueError(f"Unknown output loss '{tag}', expected one of {sorted(OUTPUT_LOSSES)}") from None
    if lipschitz is not None:
        return replace(loss, lipschitz=float(lipschitz))
    if not np.isfinite(loss.lipschitz):
        raise ValueError(f"Loss '{tag}' needs a declared Lipschitz constant")
    return loss


def network_oracle(params: NetworkParams, x, y, loss: OutputLoss, strict: bool = True) -> LossOracle:
    """ℓ(θ) = loss(f(θ; x), y) with its parameter gradient."""
    y = np.asarray(y, dtype=float)

    def oracle(theta: np.ndarray) -> OracleOutput:
        current = params.with_theta(theta)
        output = forward(current, x, strict=strict)
        upstream = loss.grad(output, y)
        return OracleOutput(loss.value(output, y), gradient(current, x, upstream, strict=strict), np.asarray(x), upstream)

    return oracle


def network_stream(params: NetworkParams, inputs, targets, loss: OutputLoss, strict: bool = True) -> List[LossOracle]:
    return [network_oracle(params, x, y, loss, strict) for x, y in zip(inputs, targets)]


def batch_objective(params: NetworkParams, inputs, targets, loss: OutputLoss,
                    strict: bool = True) -> Callable[[np.ndarray], Tuple[float, np.ndarray]]:
    """Summed loss over a recorded stream and its gradient, evaluated as one batch."""
    inputs = np.asarray(inputs, dtype=float)
    targets = np.asarray(targets, dtype=float).reshape(inputs.shape[0], -1)

    def objective(theta: np.ndarray) -> Tuple[float, np.ndarray]:
        current = params.with_theta(theta)
        output = forward(current, inputs, strict=strict)
        upstream = loss.grad(output, targets)
        return loss.value(output, targets), gradient(current, inputs, upstream, strict=strict)

    return objective


def per_round_losses(params: NetworkParams, theta, inputs, targets, loss: OutputLoss,
                     strict: bool = True) -> np.ndarray:
    """Loss of a fixed θ on each recorded round."""
    inputs = np.asarray(inputs, dtype=float)
    targets = np.asarray(targets, dtype=float).reshape(inputs.shape[0], -1)
    output = forward(params.with_theta(theta), inputs, strict=strict)
    return np.array([loss.value(row, target) for row, target in zip(output, targets)])
