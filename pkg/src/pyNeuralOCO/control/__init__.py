"""Episodic control of linear time-varying systems with network policies."""

from .bounds import bounded_state_bound, check_episode_bounds, control_lipschitz_bound, cost_lipschitz_on_trajectory
from .costs import COSTS, QuadraticTrackingCost, ZeroCost, cost_from_params, register_cost
from .driver import EpisodicRun, run_episodic
from .dynamics import (
    TransferDecomposition,
    closed_form_states,
    recover_disturbance,
    simulate,
    stabilize_transform,
    step,
    transfer_decomposition,
)
from .episode import ControlLoss, counterfactual_loss, episode_loss_and_gradient, loss_of_controls, rollout
from .generators import (
    DISTURBANCES,
    generate_disturbances,
    make_episode,
    rotation_contraction_system,
    tracking_costs,
    zero_costs,
)
from .policy import build_policy_input, policy_controls, policy_input_dim, policy_inputs
from .serialization import load_episode, save_episode
from .stability import certify, check_sequential_stability, operator_norm
from .types import EpisodeResult, LtvEpisode, PolicyInput, StabilityCertificate

__all__ = [
    "bounded_state_bound",
    "check_episode_bounds",
    "control_lipschitz_bound",
    "cost_lipschitz_on_trajectory",
    "COSTS",
    "QuadraticTrackingCost",
    "ZeroCost",
    "cost_from_params",
    "register_cost",
    "EpisodicRun",
    "run_episodic",
    "TransferDecomposition",
    "closed_form_states",
    "recover_disturbance",
    "simulate",
    "stabilize_transform",
    "step",
    "transfer_decomposition",
    "ControlLoss",
    "counterfactual_loss",
    "episode_loss_and_gradient",
    "loss_of_controls",
    "rollout",
    "DISTURBANCES",
    "generate_disturbances",
    "make_episode",
    "rotation_contraction_system",
    "tracking_costs",
    "zero_costs",
    "build_policy_input",
    "policy_controls",
    "policy_input_dim",
    "policy_inputs",
    "load_episode",
    "save_episode",
    "certify",
    "check_sequential_stability",
    "operator_norm",
    "EpisodeResult",
    "LtvEpisode",
    "PolicyInput",
    "StabilityCertificate",
]
