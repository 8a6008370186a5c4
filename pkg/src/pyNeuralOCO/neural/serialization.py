"""Save and load network parameters in the shared container format."""

from __future__ import annotations

import logging
from functools import singledispatch
from typing import Any, Dict, List, Tuple

import numpy as np

from ..core.activations import get_activation
from ..core.seeding import GENERATOR_ID
from ..core.serialization import PathLike, load_container, save_container
from .deep import DeepParams
from .dispatch import NetworkParams, architecture_metadata
from .two_layer import TwoLayerParams

logger = logging.getLogger(__name__)


@singledispatch
def _tensors(params) -> List[Tuple[str, np.ndarray]]:
    raise TypeError(f"Unsupported parameter type {type(params).__name__}")


@_tensors.register
def _(params: TwoLayerParams) -> List[Tuple[str, np.ndarray]]:
    return [("theta", params.theta), ("a", params.a), ("theta1", params.theta1)]


@_tensors.register
def _(params: DeepParams) -> List[Tuple[str, np.ndarray]]:
    return [("theta", params.theta), ("A", params.A), ("a", params.a), ("theta1", params.theta1)]


def params_header(params: NetworkParams) -> Dict[str, Any]:
    meta = {key: value for key, value in architecture_metadata(params).items() if key != "frozen_sharing"}
    meta["generator"] = GENERATOR_ID
    return meta


def save_params(path: PathLike, params: NetworkParams):
    meta = params_header(params)
    logger.debug("Saving %s parameters to %s", meta["architecture"], path)
    return save_container(path, meta["architecture"], meta, _tensors(params))


def load_params(path: PathLike) -> NetworkParams:
    container = load_container(path)
    tensors, meta = container.tensors, container.meta
    if container.tag == "two_layer":
        return TwoLayerParams(
            tensors["theta"], tensors["a"], meta["b"], get_activation(meta["activation"]), tensors["theta1"], meta["seed"]
        )
    if container.tag == "deep":
        return DeepParams(tensors["A"], tensors["theta"], tensors["a"], tensors["theta1"], meta["seed"])
    raise ValueError(f"Container holds '{container.tag}', not network parameters")
