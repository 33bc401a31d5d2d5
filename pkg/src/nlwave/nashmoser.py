"""Parameter arithmetic of the Nash-Moser scheme: loss ``delta``, ``q`` and ``P_min(D)``."""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import minimize_scalar

from .errors import ConfigurationError

__all__ = ["NashMoserParams", "nash_moser_params", "p_min", "optimize_pmin"]

M_LOSS = 3
D1 = 1
D1_PRIME = 0
DELTA = 3


@dataclass(frozen=True)
class NashMoserParams:
    D: float
    delta: float
    q: float
    P_min: float
    m: int = M_LOSS
    d1: int = D1
    d1_prime: int = D1_PRIME


def p_min(D: float) -> float:
    """``3 + D/(D-3) (sqrt(3) + sqrt(2D))^2``, valid for ``D > 3``."""
    if not D > 3:
        raise ConfigurationError(f"P_min has a pole at D = 3; need D > 3, got {D}", key="D")
    q = D - DELTA
    # (sqrt(delta) + sqrt(2(delta+q)))^2 expanded so that D = 6 gives 27 exactly
    square = DELTA + 2.0 * (DELTA + q) + 2.0 * math.sqrt(2.0 * DELTA * (DELTA + q))
    return DELTA + (q + DELTA) / q * square


def nash_moser_params(D: float) -> NashMoserParams:
    return NashMoserParams(D=float(D), delta=float(DELTA), q=float(D - DELTA), P_min=p_min(D))


def optimize_pmin(lo: float = 3.0, hi: float = 100.0, xtol: float = 1e-6) -> tuple[float, float]:
    """Minimize ``P_min`` over ``D`` in ``(lo, hi]`` by golden-section search."""
    a = lo + 1e-3
    res = minimize_scalar(p_min, bracket=(a, 10.0, hi), method="golden", tol=xtol / 10.0)
    D = float(res.x)
    if not a < D <= hi:
        raise ConfigurationError(f"optimum {D} left the bracket ({lo}, {hi}]", key="D")
    return D, p_min(D)
