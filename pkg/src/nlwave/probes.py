"""Numerical probes of product, commutator and nonlinear-term estimates.

Each probe returns the ratio of the measured left-hand side to the
right-hand side with the constant set to 1. Randomized suites report the
largest ratio seen, i.e. an empirical lower bound on the best constant.

Random fields are band-limited with coefficients drawn per mode index, so
the same seed gives the same function on every grid with the same ``L``;
refining ``N`` then changes only round-off.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from .dynamics import S0, pair_from
from .errors import ContractError, UndefinedRatio
from .kernels import Kernel, builtin_kernel
from .spectral import Field, Grid, irspec, rnorm, rproduct

__all__ = [
    "random_coefficients",
    "field_from_coefficients",
    "random_field",
    "moser_probe",
    "kato_probe",
    "nonlinear_estimate_probe",
    "nonlinear_terms_direct",
    "ProbeReport",
    "probe_suite",
    "algebra_constant",
    "ALGEBRA_SEED",
    "DEFAULT_BAND",
]

ALGEBRA_SEED = 20240611
DEFAULT_BAND = 16


def random_coefficients(rng: np.random.Generator, band: int = DEFAULT_BAND) -> np.ndarray:
    """Half-spectrum coefficients for modes ``0..band`` with random smoothness and scale."""
    k = np.arange(band + 1)
    decay = rng.uniform(0.5, 4.0)
    scale = np.exp(rng.uniform(np.log(0.1), np.log(10.0)))
    c = (rng.normal(size=band + 1) + 1j * rng.normal(size=band + 1)) * (1.0 + k**2) ** (-decay / 2)
    c[0] = c[0].real
    c *= scale
    # randomly switch off the mean or a high-frequency tail to widen the search
    if rng.random() < 0.3:
        c[0] = 0.0
    if rng.random() < 0.3:
        c[rng.integers(2, band + 1):] = 0.0
    return c


def field_from_coefficients(grid: Grid, c: np.ndarray) -> Field:
    band = len(c) - 1
    if band >= grid.N // 2:
        raise ContractError(f"band {band} not resolved on N={grid.N}")
    rc = np.zeros(grid.N // 2 + 1, dtype=complex)
    rc[: band + 1] = c
    return Field(grid, irspec(rc, grid))


def random_field(grid: Grid, rng: np.random.Generator, band: int = DEFAULT_BAND) -> Field:
    return field_from_coefficients(grid, random_coefficients(rng, band))


def _norm(f: Field, s: float) -> float:
    return rnorm(f.rspectrum, f.grid, s)


def moser_probe(f: Field, g: Field, s: float, s0: float = S0) -> float:
    """``||fg||_s / (||f||_{s0} ||g||_s + ||f||_s ||g||_{s0})``."""
    if not s > s0 > 0.5:
        raise ContractError("need s > s0 > 1/2")
    den = _norm(f, s0) * _norm(g, s) + _norm(f, s) * _norm(g, s0)
    if den == 0:
        raise UndefinedRatio("moser ratio undefined for zero inputs")
    fg = rproduct([f.rspectrum, g.rspectrum], f.grid)
    return rnorm(fg, f.grid, s) / den


def _dx(f: Field) -> np.ndarray:
    g = f.grid
    sym = 1j * g.rxi
    sym[-1] = 0.0
    return sym * f.rspectrum


def kato_probe(f: Field, u: Field, s: float, s0: float = S0, r: float = 1.0) -> float:
    """``||[Lambda^s, f] u||_r / (||f_x||_{s0} ||u||_{s+r-1} + ||f_x||_{s+r-1} ||u||_{s0})``."""
    if not -s0 < r <= s0 + 1:
        raise ContractError(f"need -s0 < r <= s0 + 1, got r={r}")
    g = f.grid
    fx = _dx(f)
    nfx0, nfx1 = rnorm(fx, g, s0), rnorm(fx, g, s + r - 1)
    scale = max(_norm(f, 0), np.finfo(float).tiny)
    if nfx0 <= 1e-13 * scale and nfx1 <= 1e-13 * scale:
        # [Lambda^s, c] = 0 exactly for constant f
        return 0.0
    lam = (1.0 + g.rxi**2) ** (s / 2)
    comm = lam * rproduct([f.rspectrum, u.rspectrum], g) - rproduct([f.rspectrum, lam * u.rspectrum], g)
    lhs = rnorm(comm, g, r)
    den = nfx0 * _norm(u, s + r - 1) + nfx1 * _norm(u, s0)
    if den == 0:
        if lhs == 0:
            return 0.0
        raise ContractError("commutator nonzero while the bound's right side vanishes")
    return lhs / den


def nonlinear_terms_direct(u: Field, phi1: Field, psi1: Field, p: int, kernel: Kernel, which: str) -> Field:
    """Second component of ``N``, ``N_u phi`` or ``N_uu(phi, psi)`` (eps = 1), via public field ops."""
    from .kernels import apply_KDx
    from .spectral import dealias_product

    if which == "N":
        base, coef = dealias_product([u] * (p + 1)), 1.0
    elif which == "N_u":
        base, coef = dealias_product([u] * p + [phi1]), p + 1.0
    elif which == "N_uu":
        base, coef = dealias_product([u] * (p - 1) + [phi1, psi1]), p * (p + 1.0)
    else:
        raise ContractError(f"which must be N, N_u or N_uu, got {which!r}")
    return apply_KDx(kernel, base) * (-coef)


def nonlinear_estimate_probe(u, phi=None, psi=None, s: float = 2.0, s0: float = S0, p: int = 1,
                             which: str = "N", kernel: Kernel | None = None) -> float:
    """Ratio of ``||N...||_{X^s}`` to the right side of the matching tame estimate (C = 1)."""
    kernel = kernel or builtin_kernel("dirac")
    U = pair_from(u)
    Phi = pair_from(phi) if phi is not None else None
    Psi = pair_from(psi) if psi is not None else None

    def xn(pair, t):
        return float(np.hypot(_norm(pair[0], t), _norm(pair[1], t)))

    u_s0, u_s1 = xn(U, s0), xn(U, s + 1)
    if which == "N":
        lhs = _norm(nonlinear_terms_direct(U[0], U[0], U[0], p, kernel, "N"), s)
        rhs = u_s0**p * u_s1
    elif which == "N_u":
        if Phi is None:
            raise ContractError("N_u probe needs phi")
        lhs = _norm(nonlinear_terms_direct(U[0], Phi[0], Phi[0], p, kernel, "N_u"), s)
        rhs = (u_s0**p + u_s0 ** (p - 1)) * (xn(Phi, s + 1) + xn(Phi, s0) * u_s1)
    elif which == "N_uu":
        if Phi is None or Psi is None:
            raise ContractError("N_uu probe needs phi and psi")
        lhs = _norm(nonlinear_terms_direct(U[0], Phi[0], Psi[0], p, kernel, "N_uu"), s)
        if u_s0 == 0 and p < 2:
            raise UndefinedRatio("||u||^(p-2) undefined for u = 0")
        low = u_s0 ** (p - 1) + (u_s0 ** (p - 2) if u_s0 > 0 else (1.0 if p == 2 else 0.0))
        rhs = low * (
            xn(Phi, s + 1) * xn(Psi, s0) + xn(Phi, s0) * xn(Psi, s + 1) + u_s1 * xn(Phi, s0) * xn(Psi, s0)
        )
    else:
        raise ContractError(f"which must be N, N_u or N_uu, got {which!r}")
    if lhs == 0:
        return 0.0
    if rhs == 0:
        raise UndefinedRatio(f"{which} estimate has zero right-hand side")
    return lhs / rhs


# ---------------------------------------------------------------------------
# randomized suites

PROBES = ("moser", "kato", "N", "N_u", "N_uu")


@dataclass(frozen=True)
class ProbeReport:
    probe: str
    samples: int
    seed: int
    empirical_C: float
    max_ratio_input_hash: str
    all_finite: bool

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def _sample(probe, grid, seed, i, s, s0, r, p, band):
    rng = np.random.default_rng([seed, i])
    n_fields = {"moser": 2, "kato": 2, "N": 2, "N_u": 4, "N_uu": 6}[probe]
    coeffs = [random_coefficients(rng, band) for _ in range(n_fields)]
    if probe in ("N", "N_u", "N_uu") and np.all(coeffs[0] == 0):
        coeffs[0] = random_coefficients(rng, band)
    fs = [field_from_coefficients(grid, c) for c in coeffs]
    if probe == "moser":
        ratio = moser_probe(fs[0], fs[1], s, s0)
    elif probe == "kato":
        ratio = kato_probe(fs[0], fs[1], s, s0, r)
    elif probe == "N":
        ratio = nonlinear_estimate_probe((fs[0], fs[1]), s=s, s0=s0, p=p, which="N")
    elif probe == "N_u":
        ratio = nonlinear_estimate_probe((fs[0], fs[1]), (fs[2], fs[3]), s=s, s0=s0, p=p, which="N_u")
    else:
        ratio = nonlinear_estimate_probe(
            (fs[0], fs[1]), (fs[2], fs[3]), (fs[4], fs[5]), s=s, s0=s0, p=p, which="N_uu"
        )
    digest = hashlib.sha256(b"".join(np.ascontiguousarray(c).tobytes() for c in coeffs)).hexdigest()
    return ratio, digest


def _chunk(args):
    probe, grid, seed, idx, s, s0, r, p, band = args
    return [_sample(probe, grid, seed, i, s, s0, r, p, band) for i in idx]


def probe_suite(probe: str, grid: Grid, samples: int = 1000, seed: int = 0, s: float = 2.0,
                s0: float = S0, r: float = 1.0, p: int = 1, band: int = DEFAULT_BAND,
                workers: int = 1) -> ProbeReport:
    """Maximum probe ratio over ``samples`` seeded random inputs.

    Sample ``i`` draws from ``default_rng([seed, i])``, so the result does not
    depend on how samples are split across ``workers``.
    """
    if probe not in PROBES:
        raise ContractError(f"probe must be one of {PROBES}")
    idx = np.arange(samples)
    if workers > 1:
        chunks = np.array_split(idx, workers)
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_chunk, [(probe, grid, seed, c, s, s0, r, p, band) for c in chunks]))
        results = [x for part in parts for x in part]
    else:
        results = _chunk((probe, grid, seed, idx, s, s0, r, p, band))
    ratios = np.array([x[0] for x in results])
    i_max = int(np.argmax(ratios))
    return ProbeReport(
        probe=probe,
        samples=samples,
        seed=seed,
        empirical_C=float(ratios[i_max]),
        max_ratio_input_hash=results[i_max][1],
        all_finite=bool(np.all(np.isfinite(ratios))),
    )


@lru_cache(maxsize=32)
def algebra_constant(grid: Grid, s: float, s0: float = S0, samples: int = 1000, seed: int = ALGEBRA_SEED) -> float:
    """Calibrated constant ``C`` in ``|<u, w u>_{H^s}| <= C ||u||_s^2 ||w||_s``.

    Twice the largest Moser ratio over a seeded corpus: with ``s0 < s``,
    ``||wu||_s <= C_M (||w||_{s0}||u||_s + ||w||_s||u||_{s0}) <= 2 C_M ||w||_s ||u||_s``.
    """
    band = min(DEFAULT_BAND, grid.N // 4 - 1)
    rep = probe_suite("moser", grid, samples=samples, seed=seed, s=s, s0=s0, band=band)
    return 2.0 * rep.empirical_C
