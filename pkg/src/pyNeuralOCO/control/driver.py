"""
Episodic OGD over network policies: play θ_t for a whole episode, rebuild the
episode from the observed trajectory, and step on the counterfactual loss.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, List

from ..core.ball import BallSet
from ..neural.dispatch import NetworkParams
from ..oco.reduction import run_nearly_convex
from ..oco.types import OracleOutput, RegretTrace, make_state
from .episode import episode_loss_and_gradient, rollout
from .types import EpisodeResult, LtvEpisode

logger = logging.getLogger(__name__)


@dataclass
class EpisodicRun:
    """Trace of episode losses, the final policy and what each episode recorded."""

    trace: RegretTrace
    params: NetworkParams
    recorded: List[LtvEpisode] = field(default_factory=list)
    results: List[EpisodeResult] = field(default_factory=list)


def run_episodic(params: NetworkParams, episodes: Iterable[LtvEpisode], decision_set: BallSet, eta0: float,
                 algorithm: str = "ogd", constant_coordinate: bool = False, strict: bool = True,
                 keep_results: bool = True) -> EpisodicRun:
    """Run the episodic learner from ``params.theta`` over the episode stream."""
    run = EpisodicRun(RegretTrace([]), params)

    def oracles() -> Iterator:
        for episode in episodes:

            def oracle(theta, episode=episode) -> OracleOutput:
                current = params.with_theta(theta)
                result = rollout(current, episode, constant_coordinate, strict)
                recorded = replace(episode, w=result.disturbances)
                _, grad = episode_loss_and_gradient(current, recorded, constant_coordinate, strict)
                run.recorded.append(recorded)
                if keep_results:
                    run.results.append(result.with_gradient(grad))
                return OracleOutput(result.loss, grad)

            yield oracle

    state = make_state(params.theta, decision_set, eta0, algorithm)
    trace = run_nearly_convex(state, oracles(), keep_events=False)
    run.trace = trace
    run.params = params.with_theta(trace.final_state.iterate)
    total = float(trace.cum_loss[-1]) if len(trace) else 0.0
    logger.info("Episodic run finished: %d episodes, cumulative loss %.6g", len(trace), total)
    return run

