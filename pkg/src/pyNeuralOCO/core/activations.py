"""
Module for defining activation functions as typed symbolic expressions.

An ``ActivationSpec`` wraps a SymPy expression in the symbol ``z`` together with
its tag and the constant ``C`` that bounds both ``|σ'|`` and the Lipschitz
constant of ``σ'``. Numeric callables are compiled once with ``sp.lambdify`` and
cached on the instance. ReLU is not smooth and carries explicit numpy kernels
instead of a compiled expression, with the subgradient convention ``σ'(0) = 0``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, Optional, Tuple, TypedDict

import numpy as np
import sympy as sp

from .symbols import z

logger = logging.getLogger(__name__)

ArrayFn = Callable[[np.ndarray], np.ndarray]

CERTIFY_RANGE = (-10.0, 10.0)
CERTIFY_POINTS = 20001


class ActivationCertificate(TypedDict):
    """Outcome of the dense-grid smoothness check."""

    tag: str
    constant: float
    max_abs_derivative: float
    max_derivative_slope: float
    passed: bool


def _compile(expression: sp.Expr) -> ArrayFn:
    fn = sp.lambdify(z, expression, "numpy")

    def evaluate(values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        # constant expressions compile to scalars
        return np.asarray(fn(values), dtype=float) + np.zeros_like(values)

    return evaluate


@dataclass(frozen=True)
class ActivationSpec:
    tag: str
    expression: sp.Expr
    constant: Optional[float]
    kernels: Optional[Tuple[ArrayFn, ArrayFn]] = None

    @property
    def smooth(self) -> bool:
        return self.kernels is None

    @cached_property
    def value(self) -> ArrayFn:
        if self.kernels is not None:
            return self.kernels[0]
        return _compile(self.expression)

    @cached_property
    def derivative(self) -> ArrayFn:
        if self.kernels is not None:
            return self.kernels[1]
        return _compile(sp.diff(self.expression, z))

    @cached_property
    def second_derivative(self) -> ArrayFn:
        if self.kernels is not None:
            raise ValueError(f"Activation '{self.tag}' has no second derivative")
        return _compile(sp.diff(self.expression, z, 2))

    def __reduce__(self):
        # compiled callables do not pickle; rebuild from the registry
        return (get_activation, (self.tag,))


def _relu(values: np.ndarray) -> np.ndarray:
    return np.maximum(np.asarray(values, dtype=float), 0.0)


def _relu_gate(values: np.ndarray) -> np.ndarray:
    return (np.asarray(values, dtype=float) > 0.0).astype(float)


_REGISTRY: Dict[str, ActivationSpec] = {}


def certify_activation(spec: ActivationSpec, lo: float = CERTIFY_RANGE[0], hi: float = CERTIFY_RANGE[1],
                       n_points: int = CERTIFY_POINTS) -> ActivationCertificate:
    """Check |σ'| ≤ C and |σ'(z) - σ'(z')| ≤ C|z - z'| on a dense grid."""
    if not spec.smooth or spec.constant is None:
        raise ValueError(f"Activation '{spec.tag}' is not smooth and has no constant C")
    grid = np.linspace(lo, hi, n_points)
    first = spec.derivative(grid)
    max_abs = float(np.max(np.abs(first)))
    slopes = np.abs(np.diff(first)) / np.diff(grid)
    max_slope = float(max(np.max(slopes), np.max(np.abs(spec.second_derivative(grid)))))
    passed = max_abs <= spec.constant + 1e-12 and max_slope <= spec.constant + 1e-12
    return {
        "tag": spec.tag,
        "constant": float(spec.constant),
        "max_abs_derivative": max_abs,
        "max_derivative_slope": max_slope,
        "passed": bool(passed),
    }


def register_activation(tag: str, expression: sp.Expr, constant: float, certify: bool = True) -> ActivationSpec:
    """Register a smooth activation given as a SymPy expression in ``z``."""
    if constant <= 0:
        raise ValueError("Activation constant C must be positive")
    if z not in expression.free_symbols:
        raise ValueError("Activation expression must depend on the symbol z")
    spec = ActivationSpec(tag, expression, float(constant))
    if certify:
        certificate = certify_activation(spec)
        if not certificate["passed"]:
            raise ValueError(
                f"Activation '{tag}' violates C={constant}: max |σ'|={certificate['max_abs_derivative']:.6g}, "
                f"max slope of σ'={certificate['max_derivative_slope']:.6g}"
            )
    _REGISTRY[tag] = spec
    logger.debug("Registered activation %s with C=%s", tag, constant)
    return spec


def get_activation(tag: str) -> ActivationSpec:
    try:
        return _REGISTRY[tag]
    except KeyError:
        raise ValueError(f"Unknown activation '{tag}'; registered: {sorted(_REGISTRY)}") from None


def resolve_activation(activation) -> ActivationSpec:
    if isinstance(activation, ActivationSpec):
        return activation
    return get_activation(str(activation))


# |tanh'| <= 1 and |tanh''| <= 4/(3*sqrt(3)) < 1
_REGISTRY["tanh"] = ActivationSpec("tanh", sp.tanh(z), 1.0)
# softplus' is the logistic function, its slope is at most 1/4
_REGISTRY["softplus"] = ActivationSpec("softplus", sp.log(1 + sp.exp(z)), 1.0)
_REGISTRY["relu"] = ActivationSpec("relu", sp.Max(0, z), None, kernels=(_relu, _relu_gate))
