"""Two-layer and deep ReLU networks: evaluation, gradients, initialization and theory constants."""

from .constants import (
    TheoryConstants,
    control_step_size,
    evaluate,
    recommended_radius,
    regime_report,
    theory_constants,
    two_layer_regret_bound,
)
from .deep import DeepParams, forward_deep, grad_deep, init_deep, kink_margin
from .dispatch import NetworkParams, architecture_metadata, decision_set, forward, gradient
from .losses import OUTPUT_LOSSES, OutputLoss, batch_objective, get_output_loss, network_oracle, network_stream
from .serialization import load_params, save_params
from .two_layer import TwoLayerParams, forward_two_layer, grad_two_layer, init_two_layer

__all__ = [
    "TheoryConstants",
    "control_step_size",
    "evaluate",
    "recommended_radius",
    "regime_report",
    "theory_constants",
    "two_layer_regret_bound",
    "DeepParams",
    "forward_deep",
    "grad_deep",
    "init_deep",
    "kink_margin",
    "NetworkParams",
    "architecture_metadata",
    "decision_set",
    "forward",
    "gradient",
    "OUTPUT_LOSSES",
    "OutputLoss",
    "batch_objective",
    "get_output_loss",
    "network_oracle",
    "network_stream",
    "load_params",
    "save_params",
    "TwoLayerParams",
    "forward_two_layer",
    "grad_two_layer",
    "init_two_layer",
]
