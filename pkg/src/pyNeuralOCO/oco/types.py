"""Type definitions for online convex optimization runs."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.ball import BallSet

ALGORITHMS = ("ogd", "adagrad")
ADAGRAD_EPS = 1e-8


class OracleOutput(NamedTuple):
    """What a loss oracle returns when queried at θ."""

    value: float
    grad: np.ndarray
    x: Optional[np.ndarray] = None
    output_grad: Optional[np.ndarray] = None


LossOracle = Callable[[np.ndarray], Union[OracleOutput, Tuple[float, np.ndarray]]]


@dataclass(frozen=True, eq=False)
class LossEvent:
    """One round: input, realized loss, parameter gradient and output gradient."""

    t: int
    loss: float
    grad: np.ndarray
    linearized_loss: float
    x: Optional[np.ndarray] = None
    output_grad: Optional[np.ndarray] = None


@dataclass(frozen=True, eq=False)
class OcoAlgorithmState:
    iterate: np.ndarray
    t: int
    algorithm: str
    eta0: float
    decision_set: BallSet
    accumulator: Optional[np.ndarray] = None
    eps_div: float = ADAGRAD_EPS

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"Unknown algorithm '{self.algorithm}', expected one of {ALGORITHMS}")
        if self.t < 1:
            raise ValueError("Round index t starts at 1")
        if self.eta0 < 0:
            raise ValueError("Base step size must be nonnegative")

    def eta(self) -> float:
        """OGD step size η_t = η₀ t^{-1/2}."""
        return self.eta0 / np.sqrt(self.t)


def make_state(theta1: np.ndarray, decision_set: BallSet, eta0: float, algorithm: str = "ogd") -> OcoAlgorithmState:
    theta1 = np.array(theta1, dtype=float)
    if theta1.shape != decision_set.shape:
        raise ValueError(f"Initial iterate shape {theta1.shape} does not match decision set {decision_set.shape}")
    if not decision_set.contains(theta1, atol=1e-12):
        raise ValueError("Initial iterate lies outside the decision set")
    accumulator = np.zeros_like(theta1) if algorithm == "adagrad" else None
    return OcoAlgorithmState(theta1, 1, algorithm, float(eta0), decision_set, accumulator)


@dataclass(frozen=True, eq=False)
class RegretTrace:
    """Per-round learner losses with the comparator column filled in later.

    ``comparator_cum_loss`` is NaN until a comparator is attached.
    """

    losses: np.ndarray
    comparator_cum_loss: np.ndarray = None
    events: Tuple[LossEvent, ...] = field(default=())
    final_state: Optional[OcoAlgorithmState] = None

    def __post_init__(self):
        losses = np.asarray(self.losses, dtype=float).reshape(-1)
        object.__setattr__(self, "losses", losses)
        if self.comparator_cum_loss is None:
            comparator = np.full(losses.shape, np.nan)
        else:
            comparator = np.asarray(self.comparator_cum_loss, dtype=float).reshape(-1)
        if comparator.shape != losses.shape:
            raise ValueError(f"Comparator column has {comparator.size} rounds, trace has {losses.size}")
        object.__setattr__(self, "comparator_cum_loss", comparator)

    def __len__(self) -> int:
        return int(self.losses.size)

    @property
    def rounds(self) -> np.ndarray:
        return np.arange(1, len(self) + 1)

    @property
    def cum_loss(self) -> np.ndarray:
        return np.cumsum(self.losses)

    @property
    def regret(self) -> np.ndarray:
        return self.cum_loss - self.comparator_cum_loss

    @property
    def avg_regret(self) -> np.ndarray:
        return self.regret / self.rounds

    def with_comparator(self, comparator_cum_loss: Sequence[float]) -> "RegretTrace":
        return replace(self, comparator_cum_loss=np.asarray(comparator_cum_loss, dtype=float))

    def truncated(self, rounds: int) -> "RegretTrace":
        """First ``rounds`` records; the final state is kept as the last known learner state."""
        return RegretTrace(self.losses[:rounds], self.comparator_cum_loss[:rounds], self.events[:rounds],
                           self.final_state)

    def records(self):
        """Rows (t, loss, cum_loss, comparator_cum_loss, regret, avg_regret)."""
        return list(
            zip(
                self.rounds.tolist(),
                self.losses.tolist(),
                self.cum_loss.tolist(),
                self.comparator_cum_loss.tolist(),
                self.regret.tolist(),
                self.avg_regret.tolist(),
            )
        )


def as_oracle_output(output) -> OracleOutput:
    """Accept either an ``OracleOutput`` or a plain ``(value, grad)`` pair."""
    if isinstance(output, OracleOutput):
        return output
    value, grad = output
    return OracleOutput(value, grad)
