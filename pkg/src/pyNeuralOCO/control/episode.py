"""
Episode rollout and the counterfactual episode loss

    L(θ) = Σ_k c_k(x_k^θ, f(θ; z̄_k))

evaluated on the recorded disturbances, with its gradient from a backward
costate pass followed by one batched network gradient.
"""

from __future__ import annotations

import logging
from typing import NamedTuple, Tuple

import numpy as np

from ..core.errors import NumericalAbortError
from ..neural.dispatch import NetworkParams, gradient
from .dynamics import recover_disturbance, simulate, step
from .policy import build_policy_input, nonzero_rows, policy_controls, policy_inputs
from .types import EpisodeResult, LtvEpisode

logger = logging.getLogger(__name__)


class ControlLoss(NamedTuple):
    """Episode loss as a function of the stacked network controls."""

    value: float
    control_grads: np.ndarray
    states: np.ndarray
    step_costs: np.ndarray


def rollout(params: NetworkParams, episode: LtvEpisode, constant_coordinate: bool = False,
            strict: bool = True) -> EpisodeResult:
    """Play u_k = f(θ; z̄_k), building each input from the disturbances recovered so far."""
    horizon, dx, du = episode.K, episode.dx, episode.du
    if params.d != du:
        raise ValueError(f"Policy output dimension {params.d} does not match d_u={du}")
    states = np.empty((horizon + 1, dx))
    states[0] = episode.x1
    controls = np.empty((horizon, du))
    network_controls = np.empty((horizon, du))
    step_costs = np.empty(horizon)
    recovered = np.empty((horizon, dx))
    inputs = []
    for k in range(horizon):
        x = states[k]
        z_bar = build_policy_input(recovered[:k], k + 1, horizon, dx, constant_coordinate).z_bar
        u_net = policy_controls(params, z_bar, strict=strict)[0]
        u = episode.composite_control(k, x, u_net)
        step_costs[k] = episode.costs[k].value(x, u)
        x_next = step(episode.A[k], episode.B[k], x, u_net, episode.w[k])
        if not np.all(np.isfinite(x_next)) or not np.isfinite(step_costs[k]):
            raise NumericalAbortError("non-finite state or cost during rollout", round_index=k + 1)
        states[k + 1] = x_next
        recovered[k] = recover_disturbance(x_next, episode.A[k], episode.B[k], x, u_net)
        controls[k] = u
        network_controls[k] = u_net
        inputs.append(z_bar)
    policy_matrix = np.array(inputs).reshape(horizon, -1)
    return EpisodeResult(states, controls, network_controls, step_costs, recovered, policy_matrix)


def loss_of_controls(episode: LtvEpisode, controls) -> ControlLoss:
    """Value and ∂L/∂u_k treating the network controls u_{1:K} as free variables.

    Costates run backward from λ_{K+1} = 0: g_k = ∇_u c_k + B_kᵀλ_{k+1} and
    λ_k = ∇_x c_k + A_kᵀλ_{k+1}, with F_kᵀ∇_u c_k added to the state term under feedback.
    """
    horizon = episode.K
    controls = np.asarray(controls, dtype=float).reshape(horizon, episode.du)
    states = simulate(episode, controls)
    step_costs = np.empty(horizon)
    grad_x = np.empty((horizon, episode.dx))
    grad_u = np.empty((horizon, episode.du))
    for k in range(horizon):
        x = states[k]
        u = episode.composite_control(k, x, controls[k])
        cost = episode.costs[k]
        step_costs[k] = cost.value(x, u)
        grad_u[k] = cost.grad_u(x, u)
        grad_x[k] = cost.grad_x(x, u)
        if episode.feedback is not None:
            grad_x[k] = grad_x[k] + episode.feedback[k].T @ grad_u[k]
    control_grads = np.empty_like(grad_u)
    costate = np.zeros(episode.dx)
    for k in reversed(range(horizon)):
        control_grads[k] = grad_u[k] + episode.B[k].T @ costate
        costate = grad_x[k] + episode.A[k].T @ costate
    if not np.all(np.isfinite(states)) or not np.all(np.isfinite(control_grads)):
        raise NumericalAbortError("non-finite state or costate in the counterfactual rollout", round_index=horizon)
    return ControlLoss(float(np.sum(step_costs)), control_grads, states, step_costs)


def counterfactual_loss(params: NetworkParams, episode: LtvEpisode, constant_coordinate: bool = False,
                        strict: bool = True) -> float:
    inputs = policy_inputs(episode.w, episode.K, episode.dx, constant_coordinate)
    return loss_of_controls(episode, policy_controls(params, inputs, strict=strict)).value


def episode_loss_and_gradient(params: NetworkParams, episode: LtvEpisode, constant_coordinate: bool = False,
                              strict: bool = True) -> Tuple[float, np.ndarray]:
    """L(θ) on the recorded episode and ∇_θ L = Σ_k ∇_θ f(θ; z̄_k)ᵀ g_k."""
    inputs = policy_inputs(episode.w, episode.K, episode.dx, constant_coordinate)
    result = loss_of_controls(episode, policy_controls(params, inputs, strict=strict))
    mask = nonzero_rows(inputs) if inputs.size else np.zeros(0, dtype=bool)
    if not np.any(mask):
        return result.value, np.zeros_like(params.theta)
    grad = gradient(params, inputs[mask], result.control_grads[mask], strict=strict)
    return result.value, grad
