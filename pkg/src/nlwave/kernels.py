"""Convolution kernels given by their Fourier symbol, and the operators built from them.

``K`` is the square root of convolution with the kernel: the multiplier
``sqrt(beta_hat(xi))``. Its composition with ``D_x`` has the odd symbol
``i xi sqrt(beta_hat(xi))``; the unpaired Nyquist mode is dropped.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import ConfigurationError, NonElliptic
from .spectral import Field, Grid, irspec

__all__ = [
    "Kernel",
    "ValidationReport",
    "builtin_kernel",
    "tabulated_kernel",
    "load_kernel_csv",
    "validate_kernel",
    "apply_K",
    "apply_KDx",
    "apply_K_inverse",
    "apply_beta",
    "BUILTIN_KERNELS",
    "ELLIPTIC_THRESHOLD",
]

ELLIPTIC_THRESHOLD = 1e-8


@dataclass(frozen=True)
class Kernel:
    name: str
    beta_hat: Callable[[np.ndarray], np.ndarray]
    declared_r: float | None = None
    elliptic: bool = False
    C_bound: float = 1.0

    def __call__(self, xi) -> np.ndarray:
        return np.asarray(self.beta_hat(np.asarray(xi, dtype=float)), dtype=float)

    def sqrt_symbol(self, grid: Grid) -> np.ndarray:
        """``sqrt(beta_hat)`` on the half-spectrum wavenumbers."""
        return np.sqrt(np.maximum(self(grid.rxi), 0.0))

    def kdx_symbol(self, grid: Grid) -> np.ndarray:
        """``i xi sqrt(beta_hat)`` on the half-spectrum, Nyquist zeroed."""
        sym = 1j * grid.rxi * self.sqrt_symbol(grid)
        sym[-1] = 0.0
        return sym

    def theta(self, grid: Grid) -> np.ndarray:
        """Linear dispersion ``xi sqrt(beta_hat)`` with the Nyquist entry zeroed."""
        th = grid.rxi * self.sqrt_symbol(grid)
        th[-1] = 0.0
        return th


def _dirac(xi):
    return np.ones_like(xi)


def _exponential(xi):
    return 1.0 / (1.0 + xi**2)


def _triangular(xi):
    # 4 sin^2(xi/2) / xi^2, equal to 1 at xi = 0
    return np.sinc(xi / (2 * np.pi)) ** 2


BUILTIN_KERNELS = {
    "dirac": dict(beta_hat=_dirac, declared_r=0.0, elliptic=True, C_bound=1.0),
    "exponential": dict(beta_hat=_exponential, declared_r=2.0, elliptic=True, C_bound=1.0),
    "triangular": dict(beta_hat=_triangular, declared_r=2.0, elliptic=False, C_bound=1.0),
}


def builtin_kernel(name: str) -> Kernel:
    try:
        entry = BUILTIN_KERNELS[name]
    except KeyError:
        valid = ", ".join(sorted(BUILTIN_KERNELS))
        raise ConfigurationError(f"unknown kernel {name!r}; valid names: {valid}", key="kernel") from None
    return Kernel(name=name, **entry)


def tabulated_kernel(xi, beta_hat, name: str = "custom") -> Kernel:
    """Kernel from samples ``(xi_i, beta_hat_i)`` with ``xi`` increasing from >= 0.

    Evaluated by linear interpolation of the even extension; constant beyond
    the last node.
    """
    xi = np.asarray(xi, dtype=float)
    bh = np.asarray(beta_hat, dtype=float)
    if xi.ndim != 1 or xi.shape != bh.shape or xi.size < 2:
        raise ConfigurationError("kernel table needs at least two (xi, beta_hat) rows", key="kernel")
    if xi[0] < 0 or np.any(np.diff(xi) <= 0):
        raise ConfigurationError("kernel table xi must be >= 0 and strictly increasing", key="kernel")
    if np.any(bh < 0):
        raise ConfigurationError("kernel table has negative beta_hat", key="kernel")

    def symbol(q):
        return np.interp(np.abs(q), xi, bh)

    return Kernel(name=name, beta_hat=symbol, declared_r=None, elliptic=bool(bh.min() > 0), C_bound=float(bh.max()))


def load_kernel_csv(path) -> Kernel:
    path = Path(path)
    rows = []
    with path.open(newline="") as fh:
        for i, row in enumerate(csv.reader(fh), start=1):
            if not row or row[0].lstrip().startswith("#"):
                continue
            if i == 1 and row[0].strip() == "xi":
                continue
            try:
                rows.append((float(row[0]), float(row[1])))
            except (ValueError, IndexError):
                raise ConfigurationError(f"bad kernel row {row!r}", key="kernel", line=i) from None
    xi, bh = zip(*rows) if rows else ((), ())
    return tabulated_kernel(xi, bh, name=f"custom:{path.name}")


@dataclass(frozen=True)
class ValidationReport:
    C_max: float
    C1_min: float
    xi_at_min: float
    elliptic: bool
    r_fit: float


def validate_kernel(k: Kernel, grid: Grid) -> ValidationReport:
    """Check nonnegativity/boundedness, ellipticity and decay on the grid band.

    The decay exponent is read off ``beta_hat <= C (1+xi^2)^(-r/2)`` by a
    least-squares fit of ``log beta_hat`` against ``log(1 + xi^2)`` from the
    upper half of the band outward. Oscillating symbols are fitted through
    their local maxima, monotone ones through the tail supremum over the top
    octave.
    """
    xi = grid.rxi
    bh = k(xi)
    if not np.all(np.isfinite(bh)):
        raise ConfigurationError(f"kernel {k.name!r} has non-finite symbol values", key="kernel")
    if np.any(bh < 0):
        bad = xi[np.argmin(bh)]
        raise ConfigurationError(f"kernel {k.name!r} has negative beta_hat at xi={bad:.6g}", key="kernel")
    i_min = int(np.argmin(bh))
    C1 = float(bh[i_min])
    return ValidationReport(
        C_max=float(bh.max()),
        C1_min=C1,
        xi_at_min=float(xi[i_min]),
        elliptic=C1 >= ELLIPTIC_THRESHOLD,
        r_fit=_fit_decay(k, grid),
    )


def _fit_decay(k: Kernel, grid: Grid) -> float:
    xm = grid.xi_max
    step = np.pi / grid.L / 16
    for reach in (2.0, 8.0):
        dense = np.arange(0.5 * xm, reach * xm + step, step)
        bh = k(dense)
        peaks = np.flatnonzero((bh[1:-1] >= bh[:-2]) & (bh[1:-1] > bh[2:])) + 1
        if len(peaks) >= 2:
            X, Y = dense[peaks], bh[peaks]
            break
    else:
        dense = np.arange(0.5 * xm, 2.0 * xm + step, step)
        env = np.maximum.accumulate(k(dense)[::-1])[::-1]
        top = dense <= xm
        X, Y = dense[top], env[top]
    slope = np.polyfit(np.log1p(X**2), np.log(np.maximum(Y, np.finfo(float).tiny)), 1)[0]
    return float(-2.0 * slope) + 0.0


def apply_K(k: Kernel, f: Field) -> Field:
    g = f.grid
    return Field(g, irspec(k.sqrt_symbol(g) * f.rspectrum, g))


def apply_KDx(k: Kernel, f: Field) -> Field:
    g = f.grid
    return Field(g, irspec(k.kdx_symbol(g) * f.rspectrum, g))


def apply_beta(k: Kernel, f: Field) -> Field:
    """Convolution with the kernel, i.e. the multiplier ``beta_hat``."""
    g = f.grid
    return Field(g, irspec(k(g.rxi) * f.rspectrum, g))


def inverse_sqrt_symbol(k: Kernel, grid: Grid) -> np.ndarray:
    bh = k(grid.rxi)
    i_min = int(np.argmin(bh))
    if bh[i_min] < ELLIPTIC_THRESHOLD:
        xi = float(grid.rxi[i_min])
        raise NonElliptic(
            f"kernel {k.name!r} is not elliptic on this grid: beta_hat({xi:.6g}) = {bh[i_min]:.3g}",
            xi=xi,
        )
    return 1.0 / np.sqrt(bh)


def apply_K_inverse(k: Kernel, f: Field) -> Field:
    g = f.grid
    return Field(g, irspec(inverse_sqrt_symbol(k, g) * f.rspectrum, g))
