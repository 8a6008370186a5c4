"""
Theory constants as SymPy expressions.

Formulas are stated once symbolically and evaluated by substitution, so the same
expression backs the metadata, the step-size defaults and the hard checks.
Deep-network quantities carry an unspecified constant and take ``kappa`` from
the configuration; they are monitors, not guarantees.
"""

from __future__ import annotations

import logging
from typing import Any, Dict, Mapping, Optional, TypedDict

import sympy as sp

from ..core.symbols import C, D, G, H, K, L, L_c, R, T, b, d, eps, kappa, m, p

logger = logging.getLogger(__name__)

# two-layer network
TWO_LAYER_GRAD_BOUND = C * L * sp.sqrt(m) / b
TWO_LAYER_MARGIN = 2 * C * L * R**2 / b
TWO_LAYER_STEP = 2 * R * b / (C * L * sp.sqrt(m))
TWO_LAYER_REGRET = 3 * C * L * R * sp.sqrt(m * T) / b + 2 * C * L * R**2 * T / b
APPROX_RADIUS = b * D * sp.sqrt(d) / sp.sqrt(m)
RF_RADIUS = D * sp.sqrt(d)

# deep network
DEEP_STEP = 2 * R / (L * H * sp.sqrt(m))
DEEP_GRAD_BOUND = kappa * L * H * sp.sqrt(m)
DEEP_MARGIN = kappa * R ** sp.Rational(4, 3) * H ** sp.Rational(5, 2) * sp.sqrt(m * sp.log(m)) * L * sp.sqrt(d)
DEEP_RADIUS = H ** sp.Rational(-3, 2) * m ** sp.Rational(-3, 2) * p ** sp.Rational(3, 2)
DEEP_REGRET = L * sp.sqrt(d * T) / (sp.sqrt(H) * m) + L * sp.sqrt(H * d) * T / (m * sp.sqrt(m))

# generic
OGD_REGRET = 3 * R * G * sp.sqrt(T) + eps * T
CONTROL_STEP = kappa * R / (L_c * H * sp.sqrt(K) * m)

_SYMBOLS = {
    "C": C, "L": L, "b": b, "m": m, "p": p, "d": d, "H": H, "R": R, "T": T,
    "D": D, "eps": eps, "G": G, "kappa": kappa, "K": K, "L_c": L_c,
}


class TheoryConstants(TypedDict):
    """Gradient bound, near-convexity margin, base step size and radius for one architecture."""

    architecture: str
    grad_bound: float
    eps_nc: float
    eta0: float
    radius: float
    kappa: float
    explicit: bool


def evaluate(expression: sp.Expr, **values: float) -> float:
    """Substitute named values into an expression and return a float."""
    unknown = set(values) - set(_SYMBOLS)
    if unknown:
        raise ValueError(f"Unknown symbols {sorted(unknown)}")
    result = expression.subs({_SYMBOLS[name]: value for name, value in values.items()})
    return float(sp.N(result))


def recommended_radius(meta: Mapping[str, Any], rf_norm: Optional[float] = None) -> float:
    """bD√d/√m for two-layer networks (D√d when b = √m); the depth-width shape for deep ones."""
    if meta["architecture"] == "two_layer":
        if rf_norm is None:
            raise ValueError("The two-layer radius needs the RF-norm bound D")
        return evaluate(APPROX_RADIUS, b=meta["b"], D=rf_norm, d=meta["d"], m=meta["m"])
    return evaluate(DEEP_RADIUS, H=meta["H"], m=meta["m"], p=meta["p"])


def theory_constants(meta: Mapping[str, Any], loss_lipschitz: float, radius: Optional[float] = None,
                     rf_norm: Optional[float] = None, kappa_value: float = 1.0) -> TheoryConstants:
    if radius is None:
        radius = recommended_radius(meta, rf_norm)
    if meta["architecture"] == "two_layer":
        values = dict(C=meta["C"], L=loss_lipschitz, b=meta["b"], m=meta["m"], R=radius)
        return {
            "architecture": "two_layer",
            "grad_bound": evaluate(TWO_LAYER_GRAD_BOUND, C=meta["C"], L=loss_lipschitz, b=meta["b"], m=meta["m"]),
            "eps_nc": evaluate(TWO_LAYER_MARGIN, C=meta["C"], L=loss_lipschitz, R=radius, b=meta["b"]),
            "eta0": evaluate(TWO_LAYER_STEP, **values),
            "radius": float(radius),
            "kappa": 1.0,
            "explicit": True,
        }
    shape = dict(L=loss_lipschitz, H=meta["H"], m=meta["m"])
    return {
        "architecture": "deep",
        "grad_bound": evaluate(DEEP_GRAD_BOUND, kappa=kappa_value, **shape),
        "eps_nc": evaluate(DEEP_MARGIN, kappa=kappa_value, R=radius, d=meta["d"], **shape),
        "eta0": evaluate(DEEP_STEP, R=radius, **shape),
        "radius": float(radius),
        "kappa": float(kappa_value),
        "explicit": False,
    }


def two_layer_regret_bound(meta: Mapping[str, Any], loss_lipschitz: float, radius: float, rounds: int) -> float:
    """3CLR√(mT)/b + 2CLR²T/b."""
    return evaluate(TWO_LAYER_REGRET, C=meta["C"], L=loss_lipschitz, R=radius, m=meta["m"], T=rounds, b=meta["b"])


def control_step_size(radius: float, cost_lipschitz: float, H_value: int, horizon: int, width: int,
                      kappa_value: float = 1.0) -> float:
    """κR/(L_c H √K m); the constant is hidden in the rate and comes from the configuration."""
    return evaluate(CONTROL_STEP, kappa=kappa_value, R=radius, L_c=cost_lipschitz, H=H_value, K=horizon, m=width)


def regime_report(meta: Mapping[str, Any]) -> Dict[str, Any]:
    """Whether the width meets the m ≥ max(d, H³p) floor of the deep-network guarantee."""
    if meta["architecture"] != "deep":
        return {
            "architecture": meta["architecture"],
            "within_regime": True,
            "note": "guarantee holds with high probability over initialization; no width floor checked",
        }
    required = max(meta["d"], meta["H"] ** 3 * meta["p"])
    within = meta["m"] >= required
    if not within:
        logger.warning("Width m=%d is below the regime floor %d; deep-network constants are monitors only",
                       meta["m"], required)
    return {
        "architecture": "deep",
        "within_regime": bool(within),
        "required_width": int(required),
        "note": "floor ignores polylogarithmic factors and hidden constants",
    }
