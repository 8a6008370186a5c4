"""Monte-Carlo estimate of the neural tangent kernel and the ReLU closed form."""

from __future__ import annotations

from typing import NamedTuple, Union

import numpy as np
from scipy import stats

from ..core.activations import ActivationSpec, resolve_activation
from ..core.seeding import make_rng


class NtkEstimate(NamedTuple):
    estimate: float
    stderr: float


def ntk_estimate(x, y, activation: Union[str, ActivationSpec] = "relu", n_samples: int = 100_000,
                 seed: int = 0) -> NtkEstimate:
    """Average of (xᵀy) σ'(wᵀx) σ'(wᵀy) over Gaussian w, with its standard error."""
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    spec = resolve_activation(activation)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = make_rng(seed).standard_normal((n_samples, x.size))
    # the gate product is formed first so swapping x and y gives identical samples
    gates = spec.derivative(w @ x) * spec.derivative(w @ y)
    samples = float(np.dot(x, y)) * gates
    stderr = float(stats.sem(samples)) if n_samples > 1 else float("nan")
    return NtkEstimate(float(np.mean(samples)), stderr)


def arccos_kernel(x, y) -> float:
    """(xᵀy)(π - arccos(xᵀy)) / (2π) for unit x, y."""
    cosine = float(np.clip(np.dot(x, y), -1.0, 1.0))
    return cosine * (np.pi - np.arccos(cosine)) / (2.0 * np.pi)
