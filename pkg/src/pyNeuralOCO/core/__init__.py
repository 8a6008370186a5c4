"""Core module containing shared primitives: symbols, activations, decision sets and I/O."""

from .activations import ActivationSpec, certify_activation, get_activation, register_activation
from .ball import BallSet, ball_around, unconstrained
from .errors import (
    ConfigError,
    InputNormError,
    NumericalAbortError,
    OracleFailureError,
    RunAbortedError,
    ShapeMismatchError,
    TraceWriteError,
)
from .seeding import GENERATOR_ID, derive_seed, make_rng

__all__ = [
    "ActivationSpec",
    "certify_activation",
    "get_activation",
    "register_activation",
    "BallSet",
    "ball_around",
    "unconstrained",
    "ConfigError",
    "InputNormError",
    "NumericalAbortError",
    "OracleFailureError",
    "RunAbortedError",
    "ShapeMismatchError",
    "TraceWriteError",
    "GENERATOR_ID",
    "derive_seed",
    "make_rng",
]
