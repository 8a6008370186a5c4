"""Architecture-generic entry points over both parameter types."""

from __future__ import annotations

from functools import singledispatch
from typing import Any, Dict, Optional, Union

import numpy as np

from ..core.ball import BallSet, ball_around
from .deep import DeepParams, forward_deep, grad_deep
from .two_layer import TwoLayerParams, forward_two_layer, grad_two_layer

NetworkParams = Union[TwoLayerParams, DeepParams]

DEFAULT_BALL_MODE = {"two_layer": "joint", "deep": "per_slice"}


@singledispatch
def forward(params, x, strict: bool = True) -> np.ndarray:
    raise TypeError(f"Unsupported parameter type {type(params).__name__}")


@forward.register
def _(params: TwoLayerParams, x, strict: bool = True) -> np.ndarray:
    return forward_two_layer(params, x, strict=strict)


@forward.register
def _(params: DeepParams, x, strict: bool = True) -> np.ndarray:
    return forward_deep(params, x, strict=strict)


@singledispatch
def gradient(params, x, upstream, strict: bool = True) -> np.ndarray:
    raise TypeError(f"Unsupported parameter type {type(params).__name__}")


@gradient.register
def _(params: TwoLayerParams, x, upstream, strict: bool = True) -> np.ndarray:
    return grad_two_layer(params, x, upstream, strict=strict)


@gradient.register
def _(params: DeepParams, x, upstream, strict: bool = True) -> np.ndarray:
    return grad_deep(params, x, upstream, strict=strict)


@singledispatch
def architecture_metadata(params) -> Dict[str, Any]:
    raise TypeError(f"Unsupported parameter type {type(params).__name__}")


@architecture_metadata.register
def _(params: TwoLayerParams) -> Dict[str, Any]:
    return {
        "architecture": "two_layer",
        "p": params.p,
        "d": params.d,
        "m": params.m,
        "H": 1,
        "b": params.b,
        "activation": params.activation.tag,
        "C": params.activation.constant,
        "seed": params.seed,
    }


@architecture_metadata.register
def _(params: DeepParams) -> Dict[str, Any]:
    return {
        "architecture": "deep",
        "p": params.p,
        "d": params.d,
        "m": params.m,
        "H": params.H,
        "b": None,
        "activation": "relu",
        "C": None,
        "seed": params.seed,
        "frozen_sharing": "A shared across coordinates, a drawn per coordinate",
    }


def decision_set(params: NetworkParams, radius: float, mode: Optional[str] = None) -> BallSet:
    """Ball of the given radius around the initialization snapshot."""
    if mode is None:
        mode = DEFAULT_BALL_MODE[architecture_metadata(params)["architecture"]]
    return ball_around(params.theta1, radius, mode)
