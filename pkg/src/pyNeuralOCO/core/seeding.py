"""Deterministic seed derivation and generator construction."""

from __future__ import annotations

import hashlib

import numpy as np

GENERATOR_ID = "numpy.random.PCG64"

SEED_COMPONENTS = ("init", "teacher", "stream", "sampling", "system", "disturbance")


def derive_seed(master: int, component: str) -> int:
    """Stable sub-seed for a named component; adding components never perturbs others."""
    digest = hashlib.sha256(f"{int(master)}:{component}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little") & ((1 << 63) - 1)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))


def component_rng(master: int, component: str) -> np.random.Generator:
    return make_rng(derive_seed(master, component))


def unit_sphere(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    """``n`` points uniform on the unit sphere in ``dim`` dimensions."""
    points = rng.standard_normal((n, dim))
    return points / np.linalg.norm(points, axis=1, keepdims=True)
