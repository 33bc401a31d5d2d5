"""First-order evolution system and its time integrators.

The second-order equation ``u_tt = beta * (u + eps^p u^{p+1})_xx`` is run as

    u_t = K v_x,
    v_t = K u_x + eps^p K (u^{p+1})_x,

with ``K`` the square root of convolution by the kernel. In Fourier space
the linear part rotates each mode pair ``(u_hat, v_hat)`` by the angle
``theta(xi) * t`` with ``theta = xi sqrt(beta_hat)``; the nonlinear part
leaves ``u`` fixed, so its flow is an explicit kick of ``v``. Strang
splitting composes the two exact flows.

All steppers work in unscaled time ``t``. The scaled time ``tau = eps^p t``
appears only in ``linear_propagate(..., scaled=True)`` and in the
linearized solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import BlowupDetected, ConfigurationError, ContractError, NonElliptic
from .kernels import Kernel, inverse_sqrt_symbol
from .spectral import Field, Grid, irspec, rnorm, rpower, rproduct

__all__ = [
    "S0",
    "State",
    "EvolutionParams",
    "linear_propagate",
    "nonlinear_rhs",
    "nonlinear_map",
    "jacobian_apply",
    "hessian_apply",
    "step_strang",
    "step_rk4",
    "integrate",
    "solve_linearized",
    "LinearizedTrajectory",
    "convert_initial_data",
    "lattice_laplacian",
    "default_dt",
    "engine",
]

# fixed choice of the algebra index s0 > 1/2
S0 = 0.6


@dataclass(frozen=True)
class State:
    u: Field
    v: Field
    t: float = 0.0

    def __post_init__(self):
        if self.u.grid != self.v.grid:
            raise ContractError("u and v must share one grid")

    @property
    def grid(self) -> Grid:
        return self.u.grid

    @classmethod
    def zeros(cls, grid: Grid, t: float = 0.0) -> "State":
        z = Field.zeros(grid)
        return cls(z, z, t)

    def x_norm(self, s: float) -> float:
        """``||(u, v)||_{X^s} = sqrt(||u||_{H^s}^2 + ||v||_{H^s}^2)``."""
        g = self.grid
        return float(np.hypot(rnorm(self.u.rspectrum, g, s), rnorm(self.v.rspectrum, g, s)))

    def with_time(self, t: float) -> "State":
        return State(self.u, self.v, t)


@dataclass(frozen=True)
class EvolutionParams:
    kernel: Kernel
    epsilon: float
    p: int
    s: float = 2.0
    # switches the eps^p u^{p+1} term off while keeping eps for scaled time
    nonlinear: bool = True

    def __post_init__(self):
        if not (self.epsilon > 0 and np.isfinite(self.epsilon)):
            raise ConfigurationError("epsilon must be positive", key="epsilon")
        if isinstance(self.p, bool) or int(self.p) != self.p or self.p < 1:
            raise ConfigurationError("p must be a positive integer", key="p")
        object.__setattr__(self, "p", int(self.p))
        if self.s < S0 + 1 - 1e-12:
            raise ConfigurationError(f"s must be >= s0 + 1 = {S0 + 1}", key="s")

    @property
    def eps_p(self) -> float:
        return self.epsilon**self.p

    @property
    def coupling(self) -> float:
        """Coefficient of the nonlinear term actually integrated."""
        return self.eps_p if self.nonlinear else 0.0


Pair = tuple  # (Field, Field)


def _pair(obj) -> tuple[Field, Field]:
    if isinstance(obj, State):
        return obj.u, obj.v
    a, b = obj
    return a, b


class _Engine:
    """Precomputed symbols for one (grid, kernel, eps, p) combination."""

    def __init__(self, grid: Grid, prm: EvolutionParams):
        self.grid = grid
        self.prm = prm
        self.p = prm.p
        self.c = prm.coupling
        self.kdx = prm.kernel.kdx_symbol(grid)
        self.theta = prm.kernel.theta(grid)
        self._rot = {}

    def rotation(self, dt: float, scale: float = 1.0):
        key = (dt, scale)
        r = self._rot.get(key)
        if r is None:
            ang = self.theta * (dt * scale)
            r = (np.cos(ang), 1j * np.sin(ang))
            if len(self._rot) > 64:
                self._rot.clear()
            self._rot[key] = r
        return r

    def rotate(self, U, V, dt, scale=1.0):
        c, s = self.rotation(dt, scale)
        return c * U + s * V, s * U + c * V

    def nl(self, U):
        """Half-spectrum of ``eps^p K D_x (u^{p+1})``."""
        if self.c == 0.0:
            return np.zeros_like(U)
        return self.c * self.kdx * rpower(U, self.grid, self.p + 1)

    def rhs(self, U, V):
        return self.kdx * V, self.kdx * U + self.nl(U)

    def strang(self, U, V, dt):
        V = V + 0.5 * dt * self.nl(U)
        U, V = self.rotate(U, V, dt)
        V = V + 0.5 * dt * self.nl(U)
        return U, V

    def rk4(self, U, V, dt):
        k1u, k1v = self.rhs(U, V)
        k2u, k2v = self.rhs(U + 0.5 * dt * k1u, V + 0.5 * dt * k1v)
        k3u, k3v = self.rhs(U + 0.5 * dt * k2u, V + 0.5 * dt * k2v)
        k4u, k4v = self.rhs(U + dt * k3u, V + dt * k3v)
        return (
            U + dt / 6 * (k1u + 2 * k2u + 2 * k3u + k4u),
            V + dt / 6 * (k1v + 2 * k2v + 2 * k3v + k4v),
        )


@lru_cache(maxsize=32)
def engine(grid: Grid, prm: EvolutionParams) -> _Engine:
    return _Engine(grid, prm)


def _finite(U, V) -> bool:
    return bool(np.all(np.isfinite(U)) and np.all(np.isfinite(V)))


def _state(grid, U, V, t) -> State:
    return State(Field(grid, irspec(U, grid)), Field(grid, irspec(V, grid)), t)


def linear_propagate(st: State, dtau: float, prm: EvolutionParams, scaled: bool = False) -> State:
    """Exact flow of the linear system over ``dtau``.

    With ``scaled=True`` the step is in ``tau = eps^p t`` (frequencies
    divided by ``eps^p``); the returned time is then still reported in ``t``.
    """
    if dtau == 0:
        return st
    eng = engine(st.grid, prm)
    scale = 1.0 / prm.eps_p if scaled else 1.0
    U, V = eng.rotate(st.u.rspectrum, st.v.rspectrum, dtau, scale)
    return _state(st.grid, U, V, st.t + dtau * scale)


def nonlinear_rhs(st: State, prm: EvolutionParams) -> tuple[Field, Field]:
    """``(K v_x, K u_x + eps^p K (u^{p+1})_x)``."""
    if not np.all(np.isfinite(st.u.samples)):
        raise BlowupDetected(st.t)
    g = st.grid
    dU, dV = engine(g, prm).rhs(st.u.rspectrum, st.v.rspectrum)
    if not _finite(dU, dV):
        raise BlowupDetected(st.t)
    return Field(g, irspec(dU, g)), Field(g, irspec(dV, g))


def nonlinear_map(st, prm: EvolutionParams) -> tuple[Field, Field]:
    """``N[u] = (0, -eps^p K D_x(u^{p+1}))``, entering the system as ``u_t + ... + N[u] = 0``."""
    u, _ = _pair(st)
    g = u.grid
    eng = engine(g, prm)
    out = -prm.eps_p * eng.kdx * rpower(u.rspectrum, g, prm.p + 1)
    return Field.zeros(g), Field(g, irspec(out, g))


def jacobian_apply(st, phi, prm: EvolutionParams) -> tuple[Field, Field]:
    """``N_u[u] phi = (0, -(p+1) eps^p K D_x(u^p phi_1))``.

    ``N`` depends on the first component only, so the derivative acts on
    ``phi_1``.
    """
    u, _ = _pair(st)
    phi1, _ = _pair(phi)
    g = u.grid
    p = prm.p
    prod = rproduct([u.rspectrum] * p + [phi1.rspectrum], g)
    out = -(p + 1) * prm.eps_p * engine(g, prm).kdx * prod
    return Field.zeros(g), Field(g, irspec(out, g))


def hessian_apply(st, phi, psi, prm: EvolutionParams) -> tuple[Field, Field]:
    """``N_uu[u](phi, psi) = (0, -p(p+1) eps^p K D_x(u^{p-1} phi_1 psi_1))``."""
    u, _ = _pair(st)
    phi1, _ = _pair(phi)
    psi1, _ = _pair(psi)
    g = u.grid
    p = prm.p
    factors = [u.rspectrum] * (p - 1) + [phi1.rspectrum, psi1.rspectrum]
    prod = rproduct(factors, g)
    out = -p * (p + 1) * prm.eps_p * engine(g, prm).kdx * prod
    return Field.zeros(g), Field(g, irspec(out, g))


def step_strang(st: State, dt: float, prm: EvolutionParams) -> State:
    if not dt > 0:
        raise ConfigurationError("dt must be positive", key="dt")
    U, V = engine(st.grid, prm).strang(st.u.rspectrum, st.v.rspectrum, dt)
    if not _finite(U, V):
        raise BlowupDetected(st.t + dt)
    return _state(st.grid, U, V, st.t + dt)


def step_rk4(st: State, dt: float, prm: EvolutionParams) -> State:
    if dt == 0:
        return st
    U, V = engine(st.grid, prm).rk4(st.u.rspectrum, st.v.rspectrum, dt)
    if not _finite(U, V):
        raise BlowupDetected(st.t + dt)
    return _state(st.grid, U, V, st.t + dt)


def integrate(st: State, prm: EvolutionParams, t_end: float, dt: float, method: str = "strang") -> State:
    """Advance to ``t_end`` with uniform steps (the last one shortened if needed)."""
    eng = engine(st.grid, prm)
    step = {"strang": eng.strang, "rk4": eng.rk4}[method]
    n = int(np.ceil((t_end - st.t) / dt - 1e-9))
    if n <= 0:
        return st
    U, V = st.u.rspectrum, st.v.rspectrum
    t = st.t
    for i in range(n):
        h = min(dt, t_end - t) if i == n - 1 else dt
        U, V = step(U, V, h)
        t = st.t + (i + 1) * dt if i < n - 1 else t_end
        if not _finite(U, V):
            raise BlowupDetected(t)
    return _state(st.grid, U, V, t)


def default_dt(grid: Grid, prm: EvolutionParams, u_max: float = 1.0) -> float:
    """Half a grid spacing, shrunk by the nonlinear speed correction ``(p+1) eps^p |u|^p``."""
    speed = 1.0 + (prm.p + 1) * prm.coupling * max(u_max, 0.0) ** prm.p
    return 0.5 * grid.dx / speed


# ---------------------------------------------------------------------------
# linearized system in scaled time


@dataclass
class LinearizedTrajectory:
    taus: np.ndarray
    states: list = field(repr=False)
    xs_norms: np.ndarray = field(repr=False)


def _w_at(w, tau, dt):
    if isinstance(w, Field):
        return w
    if callable(w):
        return w(tau)
    j = tau / dt
    i = int(np.floor(j + 1e-12))
    if i >= len(w) - 1:
        if j > len(w) - 1 + 1e-9:
            raise ContractError(f"w samples cover tau <= {(len(w) - 1) * dt}, asked for {tau}")
        return w[-1]
    a = j - i
    if a < 1e-12:
        return w[i]
    return w[i] * (1 - a) + w[i + 1] * a


def solve_linearized(
    w,
    f,
    g,
    prm: EvolutionParams,
    tau_end: float,
    dt: float,
    record_every: int = 1,
) -> LinearizedTrajectory:
    """Strang-split solution of the scaled linearized system

        u_tau = eps^-p K v_x + f_1,
        v_tau = eps^-p K u_x + K (w u)_x + f_2.

    ``w`` is a Field (frozen in tau), a sequence of Fields sampled every
    ``dt`` (interpolated linearly in between), or a callable ``tau -> Field``.
    ``f`` is a constant pair or ``None``; ``g`` is the initial pair. Every
    ``record_every``-th state is kept, with ``t = tau``.
    """
    g1, g2 = _pair(g)
    grid = g1.grid
    eng = engine(grid, prm)
    inv = 1.0 / prm.eps_p
    kdx = eng.kdx
    if f is None:
        F1 = F2 = None
    else:
        f1, f2 = _pair(f)
        F1, F2 = f1.rspectrum, f2.rspectrum

    def kick(U, V, h, tau):
        W = _w_at(w, tau, dt).rspectrum
        dV = h * kdx * rproduct([W, U], grid)
        if F1 is not None:
            dV = dV + 0.5 * h * h * kdx * rproduct([W, F1], grid) + h * F2
            U = U + h * F1
        return U, V + dV

    n = int(round(tau_end / dt))
    if n < 0 or abs(n * dt - tau_end) > 1e-9 * max(1.0, tau_end):
        raise ConfigurationError("tau_end must be a nonnegative multiple of dt", key="dt")
    U, V = g1.rspectrum, g2.rspectrum
    taus = [0.0]
    states = [State(g1, g2, 0.0)]
    norms = [states[0].x_norm(prm.s)]
    for i in range(n):
        tau = i * dt
        U, V = kick(U, V, 0.5 * dt, tau)
        U, V = eng.rotate(U, V, dt, inv)
        U, V = kick(U, V, 0.5 * dt, tau + dt)
        if not _finite(U, V):
            raise BlowupDetected(tau + dt)
        if (i + 1) % record_every and i != n - 1:
            continue
        st = _state(grid, U, V, (i + 1) * dt)
        taus.append((i + 1) * dt)
        states.append(st)
        norms.append(st.x_norm(prm.s))
    return LinearizedTrajectory(np.array(taus), states, np.array(norms))


# ---------------------------------------------------------------------------
# initial data and the lattice form


def convert_initial_data(u0: Field, kernel: Kernel, w0: Field | None = None, v0: Field | None = None) -> State:
    """System data ``(u0, v0)`` from second-order data.

    Either ``w0`` (meaning ``u_1 = (w0)_x``, so ``v0 = K^{-1} w0``, which
    needs an elliptic kernel) or ``v0`` itself (``u_1 = (K v0)_x``) is given.
    """
    if (w0 is None) == (v0 is None):
        raise ConfigurationError("give exactly one of w0 or v0", key="initial")
    g = u0.grid
    if v0 is not None:
        return State(u0, v0, 0.0)
    if np.all(kernel(g.rxi) == 1.0):
        return State(u0, w0, 0.0)
    try:
        inv = inverse_sqrt_symbol(kernel, g)
    except NonElliptic as exc:
        raise NonElliptic(
            f"{exc}; pass v0 directly (u_1 = (K v0)_x) for non-elliptic kernels",
            xi=exc.xi,
        ) from None
    return State(u0, Field(g, irspec(inv * w0.rspectrum, g)), 0.0)


def _shift_count(grid: Grid) -> int:
    m = 1.0 / grid.dx
    mi = int(round(m))
    if mi < 1 or abs(m - mi) > 1e-9 * m:
        raise ConfigurationError(f"1/dx = {m!r} is not an integer; the lattice stencil needs unit shifts", key="N")
    return mi


def lattice_laplacian(f) -> Field | np.ndarray:
    """``z(x-1) - 2 z(x) + z(x+1)`` by periodic index shifts."""
    m = _shift_count(f.grid)
    z = f.samples
    return Field(f.grid, np.roll(z, m) - 2 * z + np.roll(z, -m))


def lattice_shift(grid: Grid) -> int:
    return _shift_count(grid)


def pair_from(obj: Sequence) -> tuple[Field, Field]:
    return _pair(obj)
