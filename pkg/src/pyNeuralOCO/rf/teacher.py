"""
Random-feature teachers: finite sums g_i(x) = Σ_r c_{i,r}ᵀx σ'(w_{i,r}ᵀx).

A teacher with m_rf features per coordinate is exactly the linearization of a
width-2·m_rf two-layer network around its initialization, which makes it a
sharp comparator for the online experiments.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ..core.activations import ActivationSpec, get_activation, resolve_activation
from ..core.errors import ShapeMismatchError
from ..core.seeding import GENERATOR_ID, make_rng
from ..core.serialization import PathLike, load_container, save_container
from ..core.validation import check_unit_input
from ..neural.two_layer import TwoLayerParams

logger = logging.getLogger(__name__)

COEFFICIENT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class RfTeacher:
    w: np.ndarray
    c: np.ndarray
    activation: ActivationSpec
    D: float
    seed: Optional[int] = None

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        c = np.asarray(self.c, dtype=float)
        if w.ndim != 3 or c.shape != w.shape:
            raise ShapeMismatchError(f"Features and coefficients must share shape (d, m_rf, p), got {w.shape}, {c.shape}")
        if self.D < 0:
            raise ValueError(f"RF-norm bound D must be nonnegative, got {self.D}")
        limit = 2.0 * self.D / w.shape[1]
        worst = float(np.max(np.linalg.norm(c, axis=-1))) if c.size else 0.0
        if worst > limit * (1 + COEFFICIENT_TOL) + COEFFICIENT_TOL:
            raise ValueError(f"Coefficient norm {worst:.6g} exceeds 2D/m_rf = {limit:.6g}")
        for name, value in (("w", w), ("c", c)):
            value = value.copy()
            value.setflags(write=False)
            object.__setattr__(self, name, value)
        object.__setattr__(self, "D", float(self.D))
        object.__setattr__(self, "activation", resolve_activation(self.activation))

    @property
    def d(self) -> int:
        return self.w.shape[0]

    @property
    def m_rf(self) -> int:
        return self.w.shape[1]

    @property
    def p(self) -> int:
        return self.w.shape[2]

    def scaled(self, factor: float) -> "RfTeacher":
        """Same features, coefficients times ``factor`` (the bound D scales with it)."""
        return RfTeacher(self.w, self.c * factor, self.activation, self.D * abs(factor), self.seed)


def _coefficients(rng: np.random.Generator, d: int, m_rf: int, p: int, D: float) -> np.ndarray:
    # norms ρ·D/m_rf with ρ ~ U[0, 1]: the construction bound of the width-2·m_rf network
    directions = rng.standard_normal((d, m_rf, p))
    directions /= np.linalg.norm(directions, axis=-1, keepdims=True)
    rho = rng.uniform(size=(d, m_rf, 1))
    return directions * rho * (D / m_rf)


def sample_teacher(p: int, d: int, D: float, m_rf: int, seed: int,
                   activation: Union[str, ActivationSpec] = "tanh") -> RfTeacher:
    if D < 0 or m_rf < 1:
        raise ValueError(f"Need D >= 0 and m_rf >= 1, got D={D}, m_rf={m_rf}")
    rng = make_rng(seed)
    w = rng.standard_normal((d, m_rf, p))
    c = _coefficients(rng, d, m_rf, p, D)
    logger.debug("Sampled RF teacher p=%d d=%d m_rf=%d D=%g", p, d, m_rf, D)
    return RfTeacher(w, c, activation, D, seed)


def teacher_for_student(params: TwoLayerParams, D: float, seed: int) -> RfTeacher:
    """Teacher whose features are the student's initial rows θ₁[i, r], r < m/2."""
    half = params.m // 2
    c = _coefficients(make_rng(seed), params.d, half, params.p, D)
    return RfTeacher(params.theta1[:, :half, :], c, params.activation, D, seed)


def eval_teacher(teacher: RfTeacher, x, strict: bool = True) -> np.ndarray:
    """Teacher output, shape (d,) for one input or (n, d) for a batch."""
    x = check_unit_input(x, teacher.p, strict=strict)
    inputs = x[None, :] if x.ndim == 1 else x
    gates = teacher.activation.derivative(np.einsum("irp,np->nir", teacher.w, inputs))
    out = np.einsum("nir,irp,np->ni", gates, teacher.c, inputs)
    return out[0] if x.ndim == 1 else out


def save_teacher(path: PathLike, teacher: RfTeacher):
    meta = {
        "p": teacher.p,
        "d": teacher.d,
        "m_rf": teacher.m_rf,
        "D": teacher.D,
        "activation": teacher.activation.tag,
        "seed": teacher.seed,
        "generator": GENERATOR_ID,
    }
    return save_container(path, "rf_teacher", meta, [("w", teacher.w), ("c", teacher.c)])


def load_teacher(path: PathLike) -> RfTeacher:
    """Load a teacher; the coefficient bound is re-checked on construction."""
    container = load_container(path)
    if container.tag != "rf_teacher":
        raise ValueError(f"Container holds '{container.tag}', not an RF teacher")
    meta = container.meta
    return RfTeacher(
        container.tensors["w"], container.tensors["c"], get_activation(meta["activation"]), meta["D"], meta["seed"]
    )
