"""
The invariant suite: every check with an explicit constant is asserted (``hard``),
checks whose constants are hidden in the theory are reported as monitors.

Each check returns rows ``{check, group, measured, bound, passed, hard}``.
"""

from __future__ import annotations

import logging
from typing import Callable, List, Optional, Tuple, TypedDict

import numpy as np

from ..control.bounds import check_episode_bounds
from ..control.dynamics import closed_form_states
from ..control.episode import counterfactual_loss, episode_loss_and_gradient, loss_of_controls, rollout
from ..control.generators import generate_disturbances, make_episode, rotation_contraction_system, tracking_costs
from ..control.policy import policy_input_dim
from ..control.stability import certify, check_sequential_stability
from ..core.ball import ball_around
from ..core.finite_difference import central_difference, relative_error
from ..core.seeding import derive_seed, make_rng, unit_sphere
from ..neural.constants import regime_report, theory_constants
from ..neural.deep import init_deep, kink_margin
from ..neural.dispatch import architecture_metadata, decision_set, forward, gradient
from ..neural.losses import get_output_loss, network_oracle
from ..neural.monitors import deep_output_monitor, two_layer_gradient_bound_check, two_layer_gradient_lipschitz_check
from ..neural.two_layer import init_two_layer
from ..oco.algorithms import ogd_regret_bound, step
from ..oco.reduction import run_nearly_convex
from ..oco.synthetic import NearlyConvexFamily, quadratic_comparator, quadratic_stream
from ..oco.types import OracleOutput, RegretTrace, make_state
from ..oco.validation import verify_nearly_convex
from ..rf.ntk import arccos_kernel, ntk_estimate
from ..rf.teacher import eval_teacher, sample_teacher, teacher_for_student
from .comparator import constructive_theta_star
from .config import ExperimentConfig, TolerancesSection

logger = logging.getLogger(__name__)

MARGIN_PAIRS = 500
GRADIENT_DRAWS = 500
CONTROL_INSTANCES = 100
NTK_PAIRS = 20
NTK_SAMPLES = 100_000


class CheckRow(TypedDict):
    check: str
    group: str
    measured: float
    bound: float
    passed: bool
    hard: bool


def check_row(check: str, group: str, measured: float, bound: float, passed: Optional[bool] = None,
              hard: bool = True) -> CheckRow:
    """A check passes when ``measured <= bound`` unless ``passed`` says otherwise."""
    measured, bound = float(measured), float(bound)
    if passed is None:
        passed = measured <= bound
    return {"check": check, "group": group, "measured": measured, "bound": bound, "passed": bool(passed),
            "hard": bool(hard)}


def _projection_checks(tol: TolerancesSection, rng: np.random.Generator) -> List[CheckRow]:
    joint = ball_around(rng.standard_normal((3, 4)), 1.0)
    sliced = ball_around(rng.standard_normal((3, 4)), 1.0, "per_slice")
    idempotence = optimality = closed_form = 0.0
    for _ in range(100):
        theta = 3.0 * rng.standard_normal((3, 4))
        projected = joint.project(theta)
        idempotence = max(idempotence, float(np.max(np.abs(joint.project(projected) - projected))))
        candidate = joint.sample(rng)
        optimality = max(optimality, float(np.linalg.norm(projected - theta) - np.linalg.norm(candidate - theta)))
        delta = theta - sliced.center
        norms = np.linalg.norm(delta, axis=1, keepdims=True)
        expected = sliced.center + delta * np.minimum(1.0, sliced.radius / norms)
        closed_form = max(closed_form, float(np.max(np.abs(sliced.project(theta) - expected))))
    return [
        check_row("projection_idempotence", "oco", idempotence, tol.projection),
        check_row("projection_optimality", "oco", optimality, tol.projection),
        check_row("per_slice_projection", "oco", closed_form, tol.projection),
    ]


def _feasibility_check(tol: TolerancesSection, rng: np.random.Generator) -> CheckRow:
    worst = 0.0
    for algorithm in ("ogd", "adagrad"):
        ball = ball_around(np.zeros(5), 1.0)
        state = make_state(ball.center, ball, 2.0, algorithm)
        for _ in range(100):
            state = step(state, 3.0 * rng.standard_normal(5))
            worst = max(worst, float(np.max(ball.distances(state.iterate))) - ball.radius)
    return check_row("iterate_feasibility", "oco", worst, tol.projection)


def _quadratic_run(rounds: int = 400, radius: float = 2.0) -> Tuple[RegretTrace, float]:
    """ℓ_t(θ) = ½(θ - 1)² on [-2, 2] with η₀ = 2R/G."""
    grad_bound = radius + 1.0
    targets = np.ones((rounds, 1))
    ball = ball_around(np.zeros(1), radius)
    trace = run_nearly_convex(make_state(ball.center, ball, 2.0 * radius / grad_bound), quadratic_stream(targets))
    _, per_round = quadratic_comparator(targets, ball.center, radius)
    return trace.with_comparator(np.cumsum(per_round)), ogd_regret_bound(radius, grad_bound, rounds)


def oco_checks(tol: TolerancesSection, seed: int) -> Tuple[List[CheckRow], RegretTrace]:
    rng = make_rng(seed)
    rows = _projection_checks(tol, rng)
    rows.append(_feasibility_check(tol, rng))

    trace, bound = _quadratic_run()
    rows.append(check_row("ogd_quadratic_regret", "oco", trace.regret[-1], bound))
    dominance = max(abs(event.linearized_loss - event.loss) for event in trace.events)
    rows.append(check_row("linearization_dominance", "oco", dominance, 0.0))

    family = NearlyConvexFamily()
    margin = family.certify()
    targets = family.targets(rng, 400)
    ball = ball_around(np.zeros(1), family.radius)
    synthetic = run_nearly_convex(make_state(ball.center, ball, 2.0 * family.radius / family.grad_bound),
                                  family.stream(targets), keep_events=False)
    _, per_round = family.comparator(targets)
    regret = synthetic.with_comparator(np.cumsum(per_round)).regret[-1]
    rows.append(check_row("nearly_convex_regret", "oco", regret,
                          ogd_regret_bound(family.radius, family.grad_bound, 400, margin["epsilon"])))

    def convex(theta):
        return OracleOutput(float(np.vdot(theta, theta)), 2.0 * theta)

    def concave(theta):
        return OracleOutput(-float(np.vdot(theta, theta)), -2.0 * theta)

    unit = ball_around(np.zeros(4), 1.0)
    report = verify_nearly_convex(convex, unit, 0.0, 100, seed, slack=tol.near_convex_slack)
    rows.append(check_row("convex_margin_zero", "oco", report["max_violation"], tol.near_convex_slack))
    report = verify_nearly_convex(concave, unit, 0.0, 100, seed, slack=tol.near_convex_slack)
    rows.append(check_row("concave_detected", "oco", report["max_violation"], tol.near_convex_slack,
                          passed=not report["passed"]))
    return rows, trace


def _fd_worst(func: Callable[[np.ndarray], float], analytic: np.ndarray, theta: np.ndarray,
              rng: np.random.Generator, n_coords: int, tol: TolerancesSection) -> float:
    coords = rng.choice(theta.size, size=min(n_coords, theta.size), replace=False)
    numeric = central_difference(func, theta, coords, tol.fd_step)
    return float(np.max(relative_error(analytic.ravel()[coords], numeric)))


def _network_fd(params, radius: float, rng: np.random.Generator, tol: TolerancesSection, draws: int = 10,
                kink_filter: bool = False) -> float:
    ball = decision_set(params, radius)
    worst = 0.0
    done = 0
    for _ in range(50 * draws):
        if done == draws:
            break
        current = params.with_theta(ball.sample(rng))
        x = unit_sphere(rng, 1, params.p)[0]
        if kink_filter and kink_margin(current, x) < tol.kink:
            continue
        upstream = rng.standard_normal(params.d)

        def value(theta, x=x, upstream=upstream):
            return float(upstream @ forward(params.with_theta(theta), x))

        worst = max(worst, _fd_worst(value, gradient(current, x, upstream), current.theta, rng, 50, tol))
        done += 1
    return worst


def neural_checks(config: ExperimentConfig, seed: int) -> List[CheckRow]:
    tol = config.tolerances
    rng = make_rng(seed)
    rows = []

    params = init_two_layer(8, 2, 64, seed=seed)
    outputs = forward(params, unit_sphere(rng, 100, 8))
    rows.append(check_row("symmetric_init_zero", "neural", np.max(np.abs(outputs)), 1e-10))
    rows.append(check_row("two_layer_fd", "neural", _network_fd(init_two_layer(6, 2, 16, seed=seed), 1.0, rng, tol),
                          tol.fd_rel))
    deep = init_deep(4, 2, 16, 2, seed=seed)
    rows.append(check_row("deep_fd", "neural", _network_fd(deep, 0.05, rng, tol, kink_filter=True), tol.fd_rel))

    wide = init_two_layer(8, 2, 256, b=16.0, seed=seed)
    bound = two_layer_gradient_bound_check(wide, 2.0, GRADIENT_DRAWS, seed)
    rows.append(check_row("gradient_bound", "neural", bound["measured"], bound["bound"], bound["passed"]))
    lipschitz = two_layer_gradient_lipschitz_check(wide, 2.0, GRADIENT_DRAWS, seed)
    rows.append(check_row("gradient_lipschitz", "neural", lipschitz["measured"], lipschitz["bound"],
                          lipschitz["passed"]))

    loss = get_output_loss("absolute")
    constants = theory_constants(architecture_metadata(wide), loss.lipschitz, 2.0)
    x = unit_sphere(rng, 1, 8)[0]
    oracle = network_oracle(wide, x, rng.uniform(-1.0, 1.0, size=2), loss)
    report = verify_nearly_convex(oracle, decision_set(wide, 2.0), constants["eps_nc"], MARGIN_PAIRS, seed,
                                  slack=tol.near_convex_slack)
    rows.append(check_row("two_layer_margin", "neural", report["max_violation"],
                          constants["eps_nc"] + tol.near_convex_slack))
    expected = np.array([0.5, 1.0, 4.0])
    measured = np.array([constants["eps_nc"], constants["grad_bound"], constants["eta0"]])
    rows.append(check_row("theory_constants", "neural", np.max(np.abs(measured - expected)), 1e-12))

    monitored = init_deep(8, 2, 64, 2, seed=seed)
    monitor = deep_output_monitor(monitored, 0.0, 50, seed, config.architecture.kappa)
    rows.append(check_row("deep_output_kappa", "neural", max(monitor["output_kappa"], monitor["gradient_kappa"]),
                          monitor["configured_kappa"], hard=False))
    checksum = monitored.frozen_checksum()
    ball = decision_set(monitored, 0.5)
    stream = [network_oracle(monitored, z, np.zeros(2), loss) for z in unit_sphere(rng, 10, 8)]
    trace = run_nearly_convex(make_state(monitored.theta1, ball, 0.1), stream, keep_events=False)
    moved = monitored.with_theta(trace.final_state.iterate)
    rows.append(check_row("frozen_weights", "neural", float(moved.frozen_checksum() != checksum), 0.0))
    regime = regime_report(architecture_metadata(monitored))
    rows.append(check_row("deep_regime", "neural", regime["required_width"], monitored.m, hard=False))
    return rows


def rf_checks(config: ExperimentConfig, seed: int) -> List[CheckRow]:
    rng = make_rng(seed)
    rows = []
    teacher = sample_teacher(8, 2, 1.0, 32, seed)
    norms = np.linalg.norm(teacher.c, axis=-1)
    rows.append(check_row("teacher_coefficients", "rf", np.max(norms), 2.0 / teacher.m_rf))
    inputs = unit_sphere(rng, 10, 8)
    scaled = eval_teacher(teacher.scaled(2.0), inputs)
    rows.append(check_row("teacher_linearity", "rf", np.max(np.abs(scaled - 2.0 * eval_teacher(teacher, inputs))),
                          1e-12))

    worst = 0.0
    for index in range(NTK_PAIRS):
        x = unit_sphere(rng, 1, 4)[0]
        y = x if index == 0 else unit_sphere(rng, 1, 4)[0]
        estimate = ntk_estimate(x, y, "relu", NTK_SAMPLES, derive_seed(seed, f"ntk{index}"))
        worst = max(worst, abs(estimate.estimate - arccos_kernel(x, y)) / max(estimate.stderr, 1e-15))
    rows.append(check_row("ntk_arccos", "rf", worst, 3.0))

    student = init_two_layer(8, 2, 64, seed=seed)
    theta_star = constructive_theta_star(teacher_for_student(student, 1.0, seed), student)
    radius = student.b * 1.0 * np.sqrt(student.d) / np.sqrt(student.m)
    rows.append(check_row("theta_star_feasible", "rf", np.linalg.norm((theta_star - student.theta1).ravel()),
                          radius * (1 + 1e-12)))
    return rows


def _control_instance(seed: int, horizon: int = 10, dx: int = 2, du: int = 2):
    rng = make_rng(seed)
    A, B = rotation_contraction_system(horizon, dx, du, 0.8, 1.0, rng)
    w = generate_disturbances("uniform", horizon, dx, 1.0, rng)
    episode = certify(make_episode(A, B, w, tracking_costs(horizon, np.full(dx, 0.5), 1.0), 1.0), 1.0, 0.8, 1.0)
    params = init_two_layer(policy_input_dim(horizon, dx), du, 16, seed=seed)
    return episode, params.with_theta(decision_set(params, 1.0).sample(rng)), rng


def _bound_ratios(episode, params) -> Tuple[float, float]:
    """State norm and control-gradient norm over their certified bounds; zero for uncertified episodes."""
    if episode.certificate is None:
        return 0.0, 0.0
    result = rollout(params, episode)
    grads = loss_of_controls(episode, result.network_controls).control_grads
    bounds = check_episode_bounds(episode, result, grads, episode.certificate)
    return bounds["D_x"] / bounds["state_bound"], bounds["max_control_grad"] / bounds["control_grad_bound"]


def control_checks(config: ExperimentConfig, seed: int) -> List[CheckRow]:
    tol = config.tolerances
    episode, params, rng = _control_instance(seed)
    result = rollout(params, episode)
    rows = [
        check_row("rollout_closed_form", "control",
                  np.max(np.abs(closed_form_states(episode, result.network_controls) - result.states)), tol.rollout),
        check_row("disturbance_round_trip", "control", np.max(np.abs(result.disturbances - episode.w)), tol.rollout),
    ]

    violation = -np.inf
    state_ratio, grad_ratio = _bound_ratios(episode, params)
    certified = int(episode.certificate is not None)
    for index in range(CONTROL_INSTANCES):
        instance, policy, local = _control_instance(derive_seed(seed, f"convexity{index}"))
        u, v = local.standard_normal((2, instance.K, instance.du))
        loss_u, loss_v = loss_of_controls(instance, u).value, loss_of_controls(instance, v).value
        for lam in (0.25, 0.5, 0.75):
            mixed = loss_of_controls(instance, lam * u + (1 - lam) * v).value
            violation = max(violation, mixed - lam * loss_u - (1 - lam) * loss_v)
        ratios = _bound_ratios(instance, policy)
        state_ratio, grad_ratio = max(state_ratio, ratios[0]), max(grad_ratio, ratios[1])
        certified += int(instance.certificate is not None)
    rows.append(check_row("control_convexity", "control", violation, tol.convexity))

    if certified:
        # measured / bound, worst over every certified instance
        rows.append(check_row("bounded_states", "control", state_ratio, 1.0 + 1e-12))
        rows.append(check_row("control_lipschitz", "control", grad_ratio, 1.0 + 1e-12))
    rows.append(check_row("episode_certified", "control", float(episode.certificate is None), 0.0))

    _, grad = episode_loss_and_gradient(params, episode)
    worst = _fd_worst(lambda theta: counterfactual_loss(params.with_theta(theta), episode), grad, params.theta, rng, 30,
                      tol)
    rows.append(check_row("episode_gradient_fd", "control", worst, tol.fd_rel))

    contraction = make_episode(np.repeat(0.9 * np.eye(2)[None], 5, axis=0), np.repeat(np.eye(2)[None], 5, axis=0),
                               np.zeros((5, 2)), tracking_costs(5, np.zeros(2), 1.0), 1.0)
    certificate = check_sequential_stability(contraction, 1.0, 0.9, 1.0)
    rows.append(check_row("stability_certificate", "control", certificate.worst_ratio, 1.0 + 1e-12,
                          certificate.passed))
    return rows


def run_suite(config: ExperimentConfig) -> Tuple[List[CheckRow], RegretTrace]:
    """All groups, each seeded from its own component of the master seed."""
    master = config.seeds.master
    rows, trace = oco_checks(config.tolerances, derive_seed(master, "sampling"))
    rows += neural_checks(config, derive_seed(master, "init"))
    rows += rf_checks(config, derive_seed(master, "teacher"))
    rows += control_checks(config, derive_seed(master, "system"))
    for row in rows:
        level = logging.INFO if row["passed"] or not row["hard"] else logging.WARNING
        logger.log(level, "%-26s %-8s measured %.6g bound %.6g %s", row["check"], row["group"], row["measured"],
                   row["bound"], "ok" if row["passed"] else "FAILED")
    return rows, trace
