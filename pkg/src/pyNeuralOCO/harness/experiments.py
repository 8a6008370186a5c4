"""
Experiment kinds. Each one turns an ``ExperimentConfig`` into a regret trace with its
comparator column filled, plus the parameters, checks and metadata the runner persists.
"""

from __future__ import annotations

import logging
from concurrent.futures import Executor, ThreadPoolExecutor
from dataclasses import replace
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, TypedDict

import numpy as np

from ..control.bounds import check_episode_bounds
from ..control.driver import run_episodic
from ..control.episode import counterfactual_loss, episode_loss_and_gradient, loss_of_controls
from ..control.generators import generate_disturbances, make_episode, rotation_contraction_system, tracking_costs
from ..control.policy import policy_input_dim
from ..control.stability import check_sequential_stability
from ..control.types import LtvEpisode
from ..core.ball import BallSet, ball_around
from ..core.errors import ConfigError
from ..core.seeding import component_rng, unit_sphere
from ..neural.constants import control_step_size, recommended_radius, regime_report, theory_constants
from ..neural.constants import two_layer_regret_bound
from ..neural.deep import init_deep
from ..neural.dispatch import NetworkParams, architecture_metadata, decision_set
from ..neural.losses import OutputLoss, batch_objective, get_output_loss, network_stream, per_round_losses
from ..neural.two_layer import TwoLayerParams, init_two_layer
from ..oco.algorithms import ogd_regret_bound
from ..oco.reduction import run_nearly_convex
from ..oco.synthetic import NearlyConvexFamily, quadratic_comparator, quadratic_stream
from ..oco.types import LossOracle, RegretTrace, make_state
from ..rf.teacher import RfTeacher, eval_teacher, sample_teacher, teacher_for_student
from .comparator import (
    ComparatorResult,
    budget_sweep,
    constructive_theta_star,
    fixed_comparator,
    offline_comparator,
    unconstrained_diagnostic,
)
from .config import ExperimentConfig, worker_count
from .invariants import CheckRow, check_row, run_suite

logger = logging.getLogger(__name__)


class ExperimentResult(TypedDict):
    kind: str
    trace: RegretTrace
    comparator: Optional[ComparatorResult]
    params: Optional[NetworkParams]
    teacher: Optional[RfTeacher]
    checks: List[CheckRow]
    metadata: Dict[str, Any]


def build_network(config: ExperimentConfig, p: int, d: int) -> NetworkParams:
    arch = config.architecture
    if arch.architecture == "two_layer":
        return init_two_layer(p, d, arch.m, arch.b, config.seed("init"), arch.activation)
    return init_deep(p, d, arch.m, arch.H, config.seed("init"))


def resolve_loss(config: ExperimentConfig) -> OutputLoss:
    try:
        return get_output_loss(config.architecture.loss, config.architecture.loss_lipschitz)
    except ValueError as exc:
        raise ConfigError(str(exc), field="architecture.loss_lipschitz") from exc


def resolve_radius(config: ExperimentConfig, params: NetworkParams) -> float:
    """Configured radius, or bD√d/√m with D = stream.rf_norm (two-layer) or the depth-width shape (deep)."""
    if config.architecture.radius is not None:
        return config.architecture.radius
    return recommended_radius(architecture_metadata(params), config.stream.rf_norm)


def resolve_eta0(config: ExperimentConfig, default: Callable[[], float]) -> float:
    eta0 = config.algorithm.eta0
    return float(default()) if eta0 == "paper_default" else float(eta0)


def _comparator_kind(config: ExperimentConfig, auto: str, allowed: Sequence[str]) -> str:
    kind = auto if config.output.comparator == "auto" else config.output.comparator
    if kind not in allowed:
        raise ConfigError(
            f"comparator '{kind}' is not available for {config.experiment.kind} (expected one of {tuple(allowed)})",
            field="output.comparator",
        )
    return kind


def _offline(config: ExperimentConfig, objective, per_round, theta1: np.ndarray, ball: BallSet,
             metadata: Dict[str, Any]) -> ComparatorResult:
    budget = config.output.comparator_budget
    result = offline_comparator(objective, per_round, theta1, ball, budget)
    if config.output.budget_sweep:
        budgets = sorted({max(1, budget // 2**k) for k in range(4)})
        metadata["budget_sweep"] = budget_sweep(objective, theta1, ball, budgets)
    if config.output.unconstrained_diagnostic:
        metadata["unconstrained_diagnostic"] = unconstrained_diagnostic(objective, theta1, budget)
    return result


def _feasibility(config: ExperimentConfig, comparator: ComparatorResult, ball: BallSet) -> List[CheckRow]:
    if comparator["theta"] is None:
        return []
    distance = float(np.max(ball.distances(comparator["theta"])))
    return [check_row("comparator_feasible", "harness", distance, ball.radius + config.tolerances.projection)]


def _stream_oracle_objective(oracles: Sequence[LossOracle]):
    def objective(theta: np.ndarray) -> Tuple[float, np.ndarray]:
        outputs = [oracle(theta) for oracle in oracles]
        return float(sum(out.value for out in outputs)), np.sum([out.grad for out in outputs], axis=0)

    def per_round(theta: np.ndarray) -> np.ndarray:
        return np.array([oracle(theta).value for oracle in oracles])

    return objective, per_round


def _teacher(config: ExperimentConfig, params: NetworkParams) -> RfTeacher:
    stream = config.stream
    seed = config.seed("teacher")
    if stream.teacher == "student_features":
        if not isinstance(params, TwoLayerParams):
            raise ConfigError("student-feature teachers need a two-layer student", field="stream.teacher")
        if stream.m_rf is not None and stream.m_rf != params.m // 2:
            raise ConfigError(f"student-feature teachers have m_rf = m/2 = {params.m // 2}", field="stream.m_rf")
        return teacher_for_student(params, stream.rf_norm, seed)
    m_rf = stream.m_rf if stream.m_rf is not None else max(1, config.architecture.m // 2)
    activation = params.activation if isinstance(params, TwoLayerParams) else config.architecture.activation
    return sample_teacher(params.p, params.d, stream.rf_norm, m_rf, seed, activation)


def online_rf(config: ExperimentConfig) -> ExperimentResult:
    """Online regression of an RF teacher on uniformly random unit inputs."""
    arch, stream = config.architecture, config.stream
    strict = config.experiment.strict_inputs
    params = build_network(config, arch.p, arch.d)
    meta = architecture_metadata(params)
    loss = resolve_loss(config)
    teacher = _teacher(config, params)
    radius = resolve_radius(config, params)
    ball = decision_set(params, radius, arch.ball_mode)
    constants = theory_constants(meta, loss.lipschitz, radius, kappa_value=arch.kappa)
    eta0 = resolve_eta0(config, lambda: constants["eta0"])

    rng = component_rng(config.seeds.master, "stream")
    inputs = unit_sphere(rng, stream.rounds, arch.p)
    targets = eval_teacher(teacher, inputs, strict) if stream.rounds else np.zeros((0, arch.d))
    if stream.noise > 0:
        targets = targets + stream.noise * rng.standard_normal(targets.shape)
    logger.info("online_rf: %s m=%d, T=%d, R=%.4g, eta0=%.4g", meta["architecture"], meta["m"], stream.rounds,
                radius, eta0)

    state = make_state(params.theta1, ball, eta0, config.algorithm.name)
    trace = run_nearly_convex(state, network_stream(params, inputs, targets, loss, strict), keep_events=False)

    student_features = stream.teacher == "student_features"
    allowed = ["offline_gd_oracle", "rf_teacher_loss", "zero_policy"] + (
        ["constructive_theta_star"] if student_features else []
    )
    kind = _comparator_kind(config, "constructive_theta_star" if student_features else "offline_gd_oracle", allowed)
    metadata: Dict[str, Any] = {"radius": radius, "eta0": eta0, "theory": constants, "regime": regime_report(meta)}
    if kind == "constructive_theta_star":
        theta_star = constructive_theta_star(teacher, params)
        comparator = fixed_comparator(kind, theta_star, per_round_losses(params, theta_star, inputs, targets, loss,
                                                                         strict) if stream.rounds else [])
    elif stream.rounds == 0:
        comparator = fixed_comparator(kind, None, [])
    elif kind == "offline_gd_oracle":
        objective = batch_objective(params, inputs, targets, loss, strict)
        comparator = _offline(config, objective, lambda theta: per_round_losses(params, theta, inputs, targets, loss,
                                                                                strict), params.theta1, ball, metadata)
    elif kind == "rf_teacher_loss":
        predictions = eval_teacher(teacher, inputs, strict)
        comparator = fixed_comparator(kind, None, [loss.value(f, y) for f, y in zip(predictions, targets)])
    else:
        comparator = fixed_comparator(kind, params.theta1, per_round_losses(params, params.theta1, inputs, targets,
                                                                            loss, strict))
    trace = trace.with_comparator(comparator["cum_loss"])

    checks = _feasibility(config, comparator, ball)
    if meta["architecture"] == "two_layer" and len(trace):
        bound = two_layer_regret_bound(meta, loss.lipschitz, radius, len(trace))
        exact = (config.algorithm.name == "ogd" and config.algorithm.eta0 == "paper_default"
                 and loss.tag != "square" and comparator["theta"] is not None)
        checks.append(check_row("two_layer_regret_bound", "oco", float(trace.regret[-1]), bound, hard=exact))
    return ExperimentResult(kind="online_rf", trace=trace, comparator=comparator, params=params, teacher=teacher,
                            checks=checks, metadata=metadata)


def nearly_convex_synthetic(config: ExperimentConfig) -> ExperimentResult:
    """One-dimensional streams with known constants: convex quadratics or the certified nearly-convex family."""
    stream = config.stream
    radius = stream.set_radius
    ball = ball_around(np.zeros(1), radius)
    rng = component_rng(config.seeds.master, "stream")
    metadata: Dict[str, Any] = {"family": stream.family, "radius": radius}
    if stream.family == "quadratic":
        targets = rng.uniform(-1.0, 1.0, size=(stream.rounds, 1))
        oracles = quadratic_stream(targets)
        grad_bound, epsilon = radius + 1.0, 0.0
    else:
        family = NearlyConvexFamily(stream.beta, stream.omega, radius)
        certificate = family.certify()
        metadata["certificate"] = dict(certificate)
        targets = family.targets(rng, stream.rounds)
        oracles = family.stream(targets)
        grad_bound, epsilon = family.grad_bound, certificate["epsilon"]
    eta0 = resolve_eta0(config, lambda: 2.0 * radius / grad_bound)
    metadata.update(grad_bound=grad_bound, epsilon=epsilon, eta0=eta0)
    logger.info("nearly_convex_synthetic: %s family, T=%d, G=%.4g, epsilon=%.4g", stream.family, stream.rounds,
                grad_bound, epsilon)

    state = make_state(np.zeros(1), ball, eta0, config.algorithm.name)
    trace = run_nearly_convex(state, oracles)

    kind = _comparator_kind(config, "closed_form", ["closed_form", "offline_gd_oracle", "zero_policy"])
    objective, per_round = _stream_oracle_objective(oracles)
    if not stream.rounds:
        comparator = fixed_comparator(kind, None, [])
    elif kind == "closed_form" and stream.family == "quadratic":
        theta, losses = quadratic_comparator(targets, ball.center, radius)
        comparator = fixed_comparator(kind, theta, losses)
    elif kind == "closed_form":
        theta, losses = family.comparator(targets)
        comparator = fixed_comparator(kind, np.array([theta]), losses)
    elif kind == "offline_gd_oracle":
        comparator = _offline(config, objective, per_round, np.zeros(1), ball, metadata)
    else:
        comparator = fixed_comparator(kind, ball.center, per_round(ball.center))
    trace = trace.with_comparator(comparator["cum_loss"])

    checks = _feasibility(config, comparator, ball)
    if len(trace):
        bound = ogd_regret_bound(radius, grad_bound, len(trace), epsilon)
        exact = config.algorithm.name == "ogd" and config.algorithm.eta0 == "paper_default"
        checks.append(check_row("ogd_regret_bound", "oco", float(trace.regret[-1]), bound, hard=exact))
        dominance = max(abs(event.linearized_loss - event.loss) for event in trace.events)
        checks.append(check_row("linearization_dominance", "oco", dominance, 0.0))
    return ExperimentResult(kind="nearly_convex_synthetic", trace=trace, comparator=comparator, params=None,
                            teacher=None, checks=checks, metadata=metadata)


def control_episodes(config: ExperimentConfig, count: int) -> List[LtvEpisode]:
    """A fixed rotation-contraction system with fresh disturbances every episode, certified once."""
    ctl = config.control
    A, B = rotation_contraction_system(ctl.horizon, ctl.d_x, ctl.d_u, ctl.rho, ctl.C2,
                                       component_rng(config.seeds.master, "system"), ctl.time_varying)
    costs = tracking_costs(ctl.horizon, np.full(ctl.d_x, ctl.target), ctl.mu)
    rng = component_rng(config.seeds.master, "disturbance")
    episodes = []
    certificate = None
    for index in range(count):
        w = generate_disturbances(ctl.disturbance, ctl.horizon, ctl.d_x, ctl.W, rng, period=ctl.period)
        episode = make_episode(A, B, w, costs, ctl.W)
        if index == 0:
            certificate = check_sequential_stability(episode, 1.0, ctl.rho, ctl.C2)
        episodes.append(replace(episode, certificate=certificate if certificate.passed else None))
    return episodes


def _episode_objective(params: NetworkParams, recorded: Sequence[LtvEpisode], constant_coordinate: bool,
                       strict: bool, pool: Executor):
    """Summed counterfactual loss over recorded episodes; each episode evaluated on the pool."""

    def objective(theta: np.ndarray) -> Tuple[float, np.ndarray]:
        current = params.with_theta(theta)
        parts = list(pool.map(lambda ep: episode_loss_and_gradient(current, ep, constant_coordinate, strict),
                              recorded))
        return float(sum(value for value, _ in parts)), np.sum([grad for _, grad in parts], axis=0)

    def per_round(theta: np.ndarray) -> np.ndarray:
        current = params.with_theta(theta)
        return np.array(list(pool.map(lambda ep: counterfactual_loss(current, ep, constant_coordinate, strict),
                                      recorded)))

    return objective, per_round


def _ratio(measured: float, bound: float) -> float:
    if bound > 0:
        return measured / bound
    return np.inf if measured > 0 else 0.0


def _episode_bound_checks(run) -> List[CheckRow]:
    """Worst episode, by measured/bound ratio, for the state and control-gradient bounds."""
    reports = [
        check_episode_bounds(episode, result, loss_of_controls(episode, result.network_controls).control_grads,
                             episode.certificate)
        for episode, result in zip(run.recorded, run.results)
        if episode.certificate is not None
    ]
    if not reports:
        return []
    state = max(reports, key=lambda report: _ratio(report["D_x"], report["state_bound"]))
    grad = max(reports, key=lambda report: _ratio(report["max_control_grad"], report["control_grad_bound"]))
    return [
        check_row("bounded_states", "control", state["D_x"], state["state_bound"]),
        check_row("control_lipschitz", "control", grad["max_control_grad"], grad["control_grad_bound"]),
    ]


def episodic_control(config: ExperimentConfig) -> ExperimentResult:
    """Episodic OGD over a network policy on a certified LTV family."""
    ctl, arch = config.control, config.architecture
    strict = config.experiment.strict_inputs
    episodes = control_episodes(config, config.stream.rounds)
    params = build_network(config, policy_input_dim(ctl.horizon, ctl.d_x, ctl.constant_coordinate), ctl.d_u)
    meta = architecture_metadata(params)
    radius = resolve_radius(config, params)
    ball = decision_set(params, radius, arch.ball_mode)
    cost_lipschitz = episodes[0].cost_lipschitz if episodes else 1.0
    depth = meta["H"]
    eta0 = resolve_eta0(
        config, lambda: control_step_size(radius, cost_lipschitz, depth, ctl.horizon, meta["m"], ctl.step_kappa)
    )
    certified = bool(episodes) and episodes[0].certificate is not None
    if episodes and not certified:
        logger.warning("Episodes are not certified sequentially stable; state and Lipschitz bounds are skipped")
    logger.info("episodic_control: %s m=%d, K=%d, T=%d, R=%.4g, eta0=%.4g", meta["architecture"], meta["m"],
                ctl.horizon, len(episodes), radius, eta0)

    run = run_episodic(params, episodes, ball, eta0, config.algorithm.name, ctl.constant_coordinate, strict)
    metadata: Dict[str, Any] = {
        "radius": radius,
        "eta0": eta0,
        "cost_lipschitz": cost_lipschitz,
        "certificate": episodes[0].certificate.to_dict() if certified else None,
        "regime": regime_report(meta),
        "first_input": "constant coordinate" if ctl.constant_coordinate else "zero input, zero control",
    }

    kind = _comparator_kind(config, "offline_gd_oracle", ["offline_gd_oracle", "zero_policy"])
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        objective, per_round = _episode_objective(params, run.recorded, ctl.constant_coordinate, strict, pool)
        if kind == "offline_gd_oracle" and run.recorded:
            comparator = _offline(config, objective, per_round, params.theta1, ball, metadata)
        else:
            comparator = fixed_comparator(kind, params.theta1, per_round(params.theta1) if run.recorded else [])
    trace = run.trace.with_comparator(comparator["cum_loss"])
    checks = _feasibility(config, comparator, ball) + _episode_bound_checks(run)
    return ExperimentResult(kind="episodic_control", trace=trace, comparator=comparator, params=run.params,
                            teacher=None, checks=checks, metadata=metadata)


def invariant_suite(config: ExperimentConfig) -> ExperimentResult:
    """Every hard check at desk scale; the trace is the quadratic OGD run the suite checks."""
    checks, trace = run_suite(config)
    failed = [row["check"] for row in checks if row["hard"] and not row["passed"]]
    if failed:
        logger.warning("Hard checks failed: %s", ", ".join(failed))
    logger.info("Invariant suite: %d checks, %d hard failures", len(checks), len(failed))
    return ExperimentResult(kind="invariant_suite", trace=trace, comparator=None, params=None, teacher=None,
                            checks=checks, metadata={"failed": failed})


EXPERIMENTS: Dict[str, Callable[[ExperimentConfig], ExperimentResult]] = {
    "online_rf": online_rf,
    "nearly_convex_synthetic": nearly_convex_synthetic,
    "episodic_control": episodic_control,
    "invariant_suite": invariant_suite,
}


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    return EXPERIMENTS[config.experiment.kind](config)
