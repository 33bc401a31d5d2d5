"""Energy functionals and scalar diagnostics of states."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dynamics import State, pair_from
from .errors import ContractError, HyperbolicityLost
from .spectral import Field, irspec, padded_integral, rnorm, rpower, rproduct

__all__ = [
    "EnergyReport",
    "energy_Es",
    "linearization_weight",
    "hyperbolicity_check",
    "epsilon0_estimate",
    "hamiltonian",
    "data_functional_I",
    "pair_norm",
]

LOWER = 1.0 / (2.0 * np.sqrt(2.0))
UPPER = np.sqrt(3.0) / 2.0


@dataclass(frozen=True)
class EnergyReport:
    """``Es`` and the sum norm ``Xs_norm = ||u||_{H^s} + ||v||_{H^s}``."""

    s: float
    Es: float
    Xs_norm: float
    equivalence_ok: bool
    epsilon_used: float
    Es_squared: float


def _hs_inner_r(a, b, grid, s):
    w = grid.sobolev_weight(s)
    return float(np.sum(w * np.real(a * np.conj(b))))


def energy_Es(st: State, w: Field, epsilon: float, p: int, s: float) -> EnergyReport:
    """``E_s^2 = (||u||^2 + ||v||^2 + eps^p <u, w u>_{H^s}) / 2``.

    Raises ``HyperbolicityLost`` if ``E_s^2 < 0``.
    """
    g = st.grid
    U, V = st.u.rspectrum, st.v.rspectrum
    nu, nv = rnorm(U, g, s), rnorm(V, g, s)
    WU = rproduct([w.rspectrum, U], g)
    cross = _hs_inner_r(U, WU, g, s)
    e2 = 0.5 * (nu**2 + nv**2 + epsilon**p * cross)
    if e2 < 0:
        raise HyperbolicityLost(e2)
    es = float(np.sqrt(e2))
    xs = nu + nv
    ok = bool(LOWER * xs <= es * (1 + 1e-12) and es <= UPPER * xs * (1 + 1e-12))
    return EnergyReport(s=s, Es=es, Xs_norm=xs, equivalence_ok=ok, epsilon_used=epsilon, Es_squared=e2)


def linearization_weight(u: Field, p: int) -> Field:
    """``w = (p+1) u^p``, the coefficient of the linearized system about ``u``."""
    g = u.grid
    return Field(g, irspec((p + 1) * rpower(u.rspectrum, g, p), g))


def hyperbolicity_check(w: Field, epsilon: float, p: int) -> tuple[float, bool]:
    m = float(np.min(1.0 + epsilon**p * w.samples))
    return m, m > 0


def epsilon0_estimate(w: Field, s: float, p: int = 1, C_hat: float | None = None) -> float:
    """``eps_0 = (2 C ||w||_{H^s})^{-1/p}``; infinite for ``w = 0``.

    ``C_hat`` defaults to the calibrated algebra constant for ``w``'s grid.
    """
    nw = rnorm(w.rspectrum, w.grid, s)
    if nw == 0:
        return float("inf")
    if C_hat is None:
        from .probes import algebra_constant

        C_hat = algebra_constant(w.grid, s)
    return float((1.0 / (2.0 * C_hat * nw)) ** (1.0 / p))


def hamiltonian(st: State, epsilon: float, p: int, nonlinear: bool = True) -> float:
    """``int (u^2/2 + v^2/2 + eps^p u^{p+2}/(p+2)) dx`` by trapezoid quadrature.

    The ``u^{p+2}`` term is integrated on the zero-padded grid, where the
    trapezoid rule is exact for the band-limited interpolant.
    """
    g = st.grid
    U, V = st.u.rspectrum, st.v.rspectrum
    h = 0.5 * rnorm(U, g, 0) ** 2 + 0.5 * rnorm(V, g, 0) ** 2
    if nonlinear:
        h += epsilon**p / (p + 2) * padded_integral(U, g, p + 2)
    return float(h)


def pair_norm(pair, s: float) -> float:
    a, b = pair_from(pair)
    g = a.grid
    return float(np.hypot(rnorm(a.rspectrum, g, s), rnorm(b.rspectrum, g, s)))


def data_functional_I(g, f_series: Sequence, s: float, t: float, dt: float) -> float:
    """``||g||_{X^s} + int_0^t sup_{t' <= t''} ||f(t')||_{X^s} dt''``.

    ``f_series[i]`` is the forcing pair at time ``i * dt`` (or its
    precomputed ``X^s`` norm). Between samples the norm is taken piecewise
    linear, so its running maximum is too and the trapezoid rule is exact.
    """
    if dt <= 0:
        raise ContractError("dt must be positive")
    norms = np.array([float(f) if np.isscalar(f) else pair_norm(f, s) for f in f_series], dtype=float)
    if len(norms) == 0:
        raise ContractError("empty forcing series")
    span = (len(norms) - 1) * dt
    if t < 0 or t > span * (1 + 1e-12) + 1e-15:
        raise ContractError(f"t={t} outside forcing coverage [0, {span}]")
    n_full = int(np.floor(t / dt + 1e-12))
    n_full = min(n_full, len(norms) - 1)
    total = 0.0
    running = norms[0]
    for i in range(n_full):
        a, b = norms[i], norms[i + 1]
        total += _running_max_integral(running, a, b, dt)
        running = max(running, b)
    rest = t - n_full * dt
    if rest > 1e-15 and n_full < len(norms) - 1:
        a, b = norms[n_full], norms[n_full + 1]
        b_part = a + (b - a) * rest / dt
        total += _running_max_integral(running, a, b_part, rest)
    return pair_norm(g, s) + total


def _running_max_integral(m0: float, a: float, b: float, h: float) -> float:
    # integral over [0, h] of max(m0, a + (b - a) x / h), with a <= m0
    if b <= m0:
        return m0 * h
    if a >= m0:
        return 0.5 * (a + b) * h
    x = h * (m0 - a) / (b - a)
    return m0 * x + 0.5 * (m0 + b) * (h - x)
