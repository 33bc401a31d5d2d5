"""Periodic grids, fields and Fourier multipliers.

Conventions
-----------
The box is ``[-L, L)`` with ``N`` equispaced nodes ``x_j = -L + 2Lj/N``.
Spectral coefficients are normalised as

    c_k = (1/N) sum_j u_j exp(-i xi_k x_j),     xi_k = pi k / L,

so that ``u_j = sum_k c_k exp(i xi_k x_j)``. Full spectra are stored in
numpy FFT order (``k = 0, 1, ..., N/2-1, -N/2, ..., -1``); ``Grid.xi`` uses
the same order. The phase factor from ``x_0 = -L`` is folded in, so
coefficients match the continuous transform up to the factor ``2L``.

Sobolev norms use ``||f||_{H^s}^2 = 2L sum_k (1 + xi_k^2)^s |c_k|^2``, which
for ``s = 0`` equals the trapezoid quadrature of ``int f^2`` over the box.

Hot loops elsewhere in the package work with half-spectra (``rfft`` layout,
indices ``0..N/2``) through the ``r*`` helpers at the bottom of this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigurationError, ContractError

__all__ = [
    "Grid",
    "Field",
    "Multiplier",
    "make_grid",
    "apply_multiplier",
    "sobolev_norm",
    "hs_inner",
    "l2_inner",
    "lambda_s",
    "smooth_cutoff",
    "mollify",
    "bump_transform",
    "dealias_product",
    "EVEN_REAL",
    "ODD_IMAGINARY",
    "GENERAL",
]

EVEN_REAL = "even-real"
ODD_IMAGINARY = "odd-imaginary"
GENERAL = "general"
_PARITIES = (EVEN_REAL, ODD_IMAGINARY, GENERAL)


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on ``[-L, L)``."""

    L: float
    N: int

    def __post_init__(self):
        if isinstance(self.N, bool) or int(self.N) != self.N:
            raise ConfigurationError("N must be an integer", key="N")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "L", float(self.L))
        if self.N % 2:
            raise ConfigurationError("N must be even", key="N")
        if self.N < 8:
            raise ConfigurationError("N must be >= 8", key="N")
        if not (self.L > 0 and np.isfinite(self.L)):
            raise ConfigurationError("L must be positive", key="L")

    @property
    def dx(self) -> float:
        return 2 * self.L / self.N

    @cached_property
    def x(self) -> np.ndarray:
        x = -self.L + self.dx * np.arange(self.N)
        x.flags.writeable = False
        return x

    @cached_property
    def k(self) -> np.ndarray:
        """Integer mode indices in FFT order."""
        k = np.fft.fftfreq(self.N, d=1.0 / self.N).astype(int)
        k.flags.writeable = False
        return k

    @cached_property
    def xi(self) -> np.ndarray:
        """Wavenumbers ``pi k / L`` in FFT order (Nyquist is ``-N/2``)."""
        xi = np.pi * self.k / self.L
        xi.flags.writeable = False
        return xi

    @cached_property
    def rxi(self) -> np.ndarray:
        """Nonnegative wavenumbers of the half-spectrum layout."""
        xi = np.pi * np.arange(self.N // 2 + 1) / self.L
        xi.flags.writeable = False
        return xi

    @property
    def xi_max(self) -> float:
        """Largest resolved ``|xi|`` (the Nyquist wavenumber)."""
        return np.pi * (self.N // 2) / self.L

    @cached_property
    def _phase(self) -> np.ndarray:
        # exp(-i xi_k x_0) with x_0 = -L, i.e. (-1)^k
        return np.where(self.k % 2 == 0, 1.0, -1.0)

    @cached_property
    def _rphase(self) -> np.ndarray:
        return np.where(np.arange(self.N // 2 + 1) % 2 == 0, 1.0, -1.0)

    @cached_property
    def _rcount(self) -> np.ndarray:
        # multiplicity of each half-spectrum entry in the full spectrum
        w = np.full(self.N // 2 + 1, 2.0)
        w[0] = 1.0
        w[-1] = 1.0
        return w

    def sobolev_weight(self, s: float) -> np.ndarray:
        """``2L * multiplicity * (1 + xi^2)^s`` on the half-spectrum."""
        return _sobolev_weight(self.L, self.N, float(s))


def make_grid(L: float, N: int) -> Grid:
    return Grid(L, N)


@lru_cache(maxsize=256)
def _sobolev_weight(L, N, s):
    g = Grid(L, N)
    w = 2 * L * g._rcount * (1.0 + g.rxi**2) ** s
    w.flags.writeable = False
    return w


@dataclass(frozen=True, eq=False)
class Field:
    """A real scalar field sampled on a ``Grid``.

    Fields are immutable; every operation returns a new instance.
    """

    grid: Grid
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.array(self.samples, dtype=float, copy=True)
        if a.shape != (self.grid.N,):
            raise ContractError(f"expected {self.grid.N} samples, got shape {a.shape}")
        a.flags.writeable = False
        object.__setattr__(self, "samples", a)

    @classmethod
    def from_function(cls, grid: Grid, func: Callable[[np.ndarray], np.ndarray]) -> "Field":
        return cls(grid, np.broadcast_to(func(np.asarray(grid.x)), (grid.N,)))

    @classmethod
    def zeros(cls, grid: Grid) -> "Field":
        return cls(grid, np.zeros(grid.N))

    @classmethod
    def constant(cls, grid: Grid, value: float) -> "Field":
        return cls(grid, np.full(grid.N, float(value)))

    @classmethod
    def from_spectrum(cls, grid: Grid, coeffs: np.ndarray, rtol: float = 1e-12) -> "Field":
        """Build from a full spectrum in FFT order; rejects non-real data."""
        c = np.asarray(coeffs, dtype=complex)
        vals = np.fft.ifft(c * grid._phase) * grid.N
        scale = max(np.max(np.abs(vals)), np.finfo(float).tiny)
        resid = np.max(np.abs(vals.imag)) / scale
        if resid > rtol:
            raise ContractError(f"spectrum is not Hermitian (imaginary residue {resid:.3g})")
        return cls(grid, vals.real)

    @classmethod
    def from_rspectrum(cls, grid: Grid, rcoeffs: np.ndarray) -> "Field":
        return cls(grid, irspec(rcoeffs, grid))

    @cached_property
    def spectrum(self) -> np.ndarray:
        c = np.fft.fft(self.samples) / self.grid.N * self.grid._phase
        c.flags.writeable = False
        return c

    @cached_property
    def rspectrum(self) -> np.ndarray:
        c = rspec(self.samples, self.grid)
        c.flags.writeable = False
        return c

    def _check(self, other: "Field"):
        if other.grid != self.grid:
            raise ContractError("fields live on different grids")

    def __add__(self, other):
        if isinstance(other, Field):
            self._check(other)
            return Field(self.grid, self.samples + other.samples)
        return Field(self.grid, self.samples + float(other))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Field):
            self._check(other)
            return Field(self.grid, self.samples - other.samples)
        return Field(self.grid, self.samples - float(other))

    def __neg__(self):
        return Field(self.grid, -self.samples)

    def __mul__(self, scalar):
        if isinstance(scalar, Field):
            raise TypeError("use dealias_product for field products")
        return Field(self.grid, self.samples * float(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return Field(self.grid, self.samples / float(scalar))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.samples)))


@dataclass(frozen=True)
class Multiplier:
    """Fourier multiplier ``c_k -> m(xi_k) c_k``.

    ``parity`` declares the symmetry of the symbol: ``even-real`` means
    ``m(-xi) = m(xi)`` real, ``odd-imaginary`` means ``m(-xi) = -m(xi)``
    purely imaginary. Both map real fields to real fields.
    """

    symbol: Callable[[np.ndarray], np.ndarray]
    parity: str = GENERAL

    def __post_init__(self):
        if self.parity not in _PARITIES:
            raise ConfigurationError(f"parity must be one of {_PARITIES}", key="parity")

    def __call__(self, xi):
        return np.asarray(self.symbol(np.asarray(xi, dtype=float)))

    def check_parity(self, xi1: float, atol: float = 1e-12):
        if self.parity == GENERAL:
            return
        mp, mm = complex(self(np.array([xi1]))[0]), complex(self(np.array([-xi1]))[0])
        scale = max(abs(mp), abs(mm), 1.0)
        if self.parity == EVEN_REAL:
            ok = abs(mp.imag) <= atol * scale and abs(mp - mm) <= atol * scale
        else:
            ok = abs(mp.real) <= atol * scale and abs(mp + mm) <= atol * scale
        if not ok:
            raise ContractError(
                f"symbol values m(+xi1)={mp}, m(-xi1)={mm} inconsistent with parity {self.parity!r}"
            )


def apply_multiplier(f: Field, m: Multiplier) -> Field:
    g = f.grid
    m.check_parity(np.pi / g.L)
    if m.parity == EVEN_REAL:
        sym = np.real(m(g.rxi))
        return Field(g, irspec(sym * f.rspectrum, g))
    if m.parity == ODD_IMAGINARY:
        sym = 1j * np.imag(m(g.rxi))
        sym[-1] = 0.0  # unpaired Nyquist mode
        return Field(g, irspec(sym * f.rspectrum, g))
    return Field.from_spectrum(g, m(g.xi) * f.spectrum)


def hs_inner(f: Field, g: Field, s: float = 0.0) -> float:
    """Discrete ``<f, g>_{H^s}``."""
    f._check(g)
    w = f.grid.sobolev_weight(s)
    return float(np.sum(w * np.real(f.rspectrum * np.conj(g.rspectrum))))


def l2_inner(f: Field, g: Field) -> float:
    return hs_inner(f, g, 0.0)


def sobolev_norm(f: Field, s: float) -> float:
    return rnorm(f.rspectrum, f.grid, s)


def lambda_s(f: Field, s: float) -> Field:
    """Bessel potential ``(1 - D_x^2)^{s/2}``."""
    if s == 0:
        return f
    g = f.grid
    return Field(g, irspec((1.0 + g.rxi**2) ** (s / 2) * f.rspectrum, g))


def smooth_cutoff(f: Field, theta: float) -> Field:
    """Sharp spectral projection onto ``|xi| <= theta``."""
    if theta < 0:
        raise ConfigurationError("theta must be nonnegative", key="theta")
    g = f.grid
    mask = np.abs(g.rxi) <= theta * (1 + 1e-14)
    return Field(g, irspec(np.where(mask, f.rspectrum, 0.0), g))


# Gauss-Legendre rule for the bump transform; the integrand is C^infty and
# vanishes to all orders at +-1, so a few hundred nodes reach round-off for
# |omega| up to a few hundred.
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(600)


def _bump(x):
    out = np.zeros_like(x)
    inside = np.abs(x) < 1
    out[inside] = np.exp(-1.0 / (1.0 - x[inside] ** 2))
    return out


_BUMP_W = _GL_WEIGHTS * _bump(_GL_NODES)
_BUMP_W = _BUMP_W / _BUMP_W.sum()  # unit mass


def bump_transform(omega) -> np.ndarray:
    """Fourier transform of the unit-mass standard bump on ``(-1, 1)``."""
    om = np.asarray(omega, dtype=float)
    out = np.cos(np.multiply.outer(om, _GL_NODES)) @ _BUMP_W
    return np.where(om == 0, 1.0, out)


def mollify(f: Field, h: float) -> Field:
    """Friedrichs mollifier ``J^h`` realised as the multiplier ``eta_hat(h xi)``."""
    if not h > 0:
        raise ConfigurationError("mollifier width h must be positive", key="h")
    g = f.grid
    return Field(g, irspec(bump_transform(h * g.rxi) * f.rspectrum, g))


def dealias_product(fields: Sequence[Field], total_power: int | None = None) -> Field:
    """Alias-free pointwise product, truncated back to the grid's modes.

    ``fields`` lists the factors. Passing a single field with
    ``total_power = q`` computes ``f**q``.
    """
    fields = list(fields)
    if not fields:
        raise ContractError("need at least one factor")
    q = len(fields) if total_power is None else int(total_power)
    if q < 1:
        raise ConfigurationError("total_power must be a positive integer", key="total_power")
    g = fields[0].grid
    for f in fields[1:]:
        fields[0]._check(f)
    if len(fields) == 1:
        return Field(g, irspec(rpower(fields[0].rspectrum, g, q), g))
    if len(fields) != q:
        raise ContractError(f"total_power={q} but {len(fields)} factors given")
    return Field(g, irspec(rproduct([f.rspectrum for f in fields], g), g))


# ---------------------------------------------------------------------------
# half-spectrum helpers (used by the time steppers)


def rspec(samples: np.ndarray, grid: Grid) -> np.ndarray:
    return np.fft.rfft(samples) * (grid._rphase / grid.N)


def irspec(rcoeffs: np.ndarray, grid: Grid) -> np.ndarray:
    return np.fft.irfft(rcoeffs * (grid._rphase * grid.N), n=grid.N)


def rnorm(rcoeffs: np.ndarray, grid: Grid, s: float) -> float:
    w = grid.sobolev_weight(s)
    return float(np.sqrt(np.sum(w * (rcoeffs.real**2 + rcoeffs.imag**2))))


def padded_size(N: int, q: int) -> int:
    """Smallest even grid size keeping a ``q``-fold product alias-free on ``N`` modes."""
    M = -(-((q + 1) * N) // 2)
    return M + (M % 2)


def _to_padded(rc: np.ndarray, N: int, M: int) -> np.ndarray:
    # rc excludes the +-L phase; returns samples on the M-point grid
    pad = np.zeros(M // 2 + 1, dtype=complex)
    pad[: N // 2 + 1] = rc
    pad[N // 2] *= 0.5  # split the Nyquist mode between +-N/2
    return np.fft.irfft(pad, n=M) * M


def _from_padded(samples: np.ndarray, N: int, M: int) -> np.ndarray:
    P = np.fft.rfft(samples) / M
    out = P[: N // 2 + 1].copy()
    out[N // 2] = 2 * P[N // 2].real
    return out


def rpower(rcoeffs: np.ndarray, grid: Grid, q: int) -> np.ndarray:
    """Half-spectrum of ``f**q`` (dealiased)."""
    if q == 1:
        return np.array(rcoeffs, dtype=complex)
    N = grid.N
    M = padded_size(N, q)
    # the (-1)^k phase commutes with products only on the unpadded grid, so
    # strip it, multiply in a phase-free frame, then restore
    ph = grid._rphase
    u = _to_padded(rcoeffs * ph, N, M)
    return _from_padded(u**q, N, M) * ph


def rproduct(rlist: Sequence[np.ndarray], grid: Grid) -> np.ndarray:
    """Half-spectrum of the dealiased product of several fields."""
    N = grid.N
    q = len(rlist)
    if q == 1:
        return np.array(rlist[0], dtype=complex)
    M = padded_size(N, q)
    ph = grid._rphase
    prod = _to_padded(rlist[0] * ph, N, M)
    for rc in rlist[1:]:
        prod = prod * _to_padded(rc * ph, N, M)
    return _from_padded(prod, N, M) * ph


def padded_integral(rcoeffs: np.ndarray, grid: Grid, q: int) -> float:
    """Exact ``int f**q dx`` over the box for a band-limited ``f``."""
    N = grid.N
    M = padded_size(N, q)
    u = _to_padded(rcoeffs * grid._rphase, N, M)
    return float(np.sum(u**q) * (2 * grid.L / M))
