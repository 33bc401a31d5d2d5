"""Desk-scale studies: long-time sweeps, scaling identity, lattice crosscheck,
linearized growth rates and integrator convergence."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .diagnostics import energy_Es
from .dynamics import EvolutionParams, State, _state, engine, lattice_shift, solve_linearized
from .errors import ConfigurationError
from .kernels import Kernel, builtin_kernel
from .spectral import Field, Grid, irspec, make_grid
from .trajectory import ESCAPE_FACTOR, simulate

__all__ = [
    "SweepResult",
    "gaussian_state",
    "longtime_sweep",
    "scaling_equivalence_check",
    "CrosscheckResult",
    "lattice_crosscheck",
    "GrowthFit",
    "resonant_pump",
    "random_pair",
    "linearized_growth_fit",
    "ConvergenceProblem",
    "ConvergenceResult",
    "default_problem",
    "convergence_study",
    "T_CAP",
]

T_CAP = 5.0


def gaussian_state(grid: Grid, amplitude: float = 1.0) -> State:
    """``u0 = A exp(-x^2)``, ``v0 = 0``."""
    return State(Field.from_function(grid, lambda x: amplitude * np.exp(-(x**2))), Field.zeros(grid))


# ---------------------------------------------------------------------------
# long-time sweep


@dataclass(frozen=True)
class SweepResult:
    epsilon: float
    p: int
    s: float
    T_esc: float
    product: float
    cap_hit: bool


def _sweep_point(initial, kernel, p, s, eps, T_cap, M, nonlinear, dt):
    st = initial(eps) if callable(initial) else initial
    prm = EvolutionParams(kernel, eps, p, s, nonlinear=nonlinear)
    t_cap = T_cap / prm.eps_p
    rep = simulate(st, prm, t_cap, dt=dt, M=M, diagnostics=False)
    T = rep.escape_time if rep.escaped else t_cap
    return SweepResult(eps, p, s, float(T), float(T * prm.eps_p), not rep.escaped)


def longtime_sweep(
    initial,
    kernel: Kernel,
    p: int,
    s: float,
    eps_list: Sequence[float],
    T_cap: float = T_CAP,
    M: float = ESCAPE_FACTOR,
    nonlinear: bool = True,
    dt: float | None = None,
    workers: int = 1,
) -> list[SweepResult]:
    """Escape time ``T_esc`` per ``eps``, capped at ``T_cap / eps^p``.

    ``initial`` is a State (same data for every eps) or a callable
    ``eps -> State``. Results come back in eps-descending order.
    """
    eps_list = [float(e) for e in eps_list]
    if not eps_list or min(eps_list) <= 0:
        raise ConfigurationError("eps_list must be nonempty and positive", key="epsilon")
    if not T_cap > 0:
        raise ConfigurationError("T_cap must be positive", key="T_cap")
    order = sorted(eps_list, reverse=True)
    args = [(initial, kernel, p, s, e, T_cap, M, nonlinear, dt) for e in order]
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            return list(ex.map(lambda a: _sweep_point(*a), args))
    return [_sweep_point(*a) for a in args]


# ---------------------------------------------------------------------------
# scaling identity U = eps u


def scaling_equivalence_check(
    u0: Field, v0: Field, kernel: Kernel, p: int, eps: float, t_end: float, dt: float, method: str = "strang"
) -> float:
    """``max |U - eps u|`` over all steps, where ``u`` solves the eps-form with
    data ``(u0, v0)`` and ``U`` the eps-free form with data ``(eps u0, eps v0)``."""
    g = u0.grid
    a = engine(g, EvolutionParams(kernel, eps, p))
    b = engine(g, EvolutionParams(kernel, 1.0, p))
    sa, sb = getattr(a, method), getattr(b, method)
    Ua, Va = u0.rspectrum, v0.rspectrum
    Ub, Vb = eps * u0.rspectrum, eps * v0.rspectrum
    n = int(round(t_end / dt))
    dev = 0.0
    for _ in range(n):
        Ua, Va = sa(Ua, Va, dt)
        Ub, Vb = sb(Ub, Vb, dt)
        dev = max(dev, float(np.max(np.abs(irspec(Ub, g) - eps * irspec(Ua, g)))))
    return dev


# ---------------------------------------------------------------------------
# lattice crosscheck


@dataclass(frozen=True)
class CrosscheckResult:
    dts: tuple
    deviations: tuple
    sample_times: tuple

    @property
    def final(self) -> float:
        return self.deviations[-1]


def _lattice_run(z, y, m, p, eps_p, dt, n, sample_steps):
    def rhs(z, y):
        return y, lattice_laplacian_samples(z + eps_p * z ** (p + 1), m)

    out = {}
    for i in range(1, n + 1):
        k1 = rhs(z, y)
        k2 = rhs(z + 0.5 * dt * k1[0], y + 0.5 * dt * k1[1])
        k3 = rhs(z + 0.5 * dt * k2[0], y + 0.5 * dt * k2[1])
        k4 = rhs(z + dt * k3[0], y + dt * k3[1])
        z = z + dt / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        y = y + dt / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        if i in sample_steps:
            out[i] = z
    return out


def lattice_laplacian_samples(z: np.ndarray, m: int) -> np.ndarray:
    return np.roll(z, m) - 2 * z + np.roll(z, -m)


def lattice_crosscheck(
    u0: Field,
    v0: Field,
    p: int,
    eps: float,
    t_end: float,
    dt: float = 0.02,
    refinements: int = 1,
    n_samples: int = 5,
    nonlinear: bool = True,
    method: str = "rk4",
) -> CrosscheckResult:
    """Spectral triangular-kernel run versus method-of-lines RK4 on the lattice equation
    ``u_tt = Laplacian_d (u + eps^p u^{p+1})``.

    The lattice side starts from ``u_t(0) = K (v0)_x``. Deviation is the max
    over nodes and ``n_samples`` equally spaced times of ``|u_spec - u_lat|``,
    reported for ``dt`` and each of ``refinements`` halvings.
    """
    g = u0.grid
    m = lattice_shift(g)
    prm = EvolutionParams(builtin_kernel("triangular"), eps, p, nonlinear=nonlinear)
    eng = engine(g, prm)
    step = getattr(eng, method)
    eps_p = prm.coupling
    y0 = irspec(eng.kdx * v0.rspectrum, g)
    dts, devs = [], []
    for r in range(refinements + 1):
        h = dt / 2**r
        n = int(round(t_end / h))
        if abs(n * h - t_end) > 1e-9 * max(1.0, t_end):
            raise ConfigurationError("t_end must be a multiple of dt", key="dt")
        sample_steps = {int(round(n * (j + 1) / n_samples)) for j in range(n_samples)}
        lat = _lattice_run(u0.samples.copy(), y0, m, p, eps_p, h, n, sample_steps)
        U, V = u0.rspectrum, v0.rspectrum
        dev = 0.0
        for i in range(1, n + 1):
            U, V = step(U, V, h)
            if i in sample_steps:
                dev = max(dev, float(np.max(np.abs(irspec(U, g) - lat[i]))))
        dts.append(h)
        devs.append(dev)
    times = tuple(t_end * (j + 1) / n_samples for j in range(n_samples))
    return CrosscheckResult(tuple(dts), tuple(devs), times)


# ---------------------------------------------------------------------------
# linearized growth


@dataclass(frozen=True)
class GrowthFit:
    epsilon: float
    p: int
    kappa: float
    times: np.ndarray = field(repr=False)
    energies: np.ndarray = field(repr=False)


def resonant_pump(grid: Grid, kernel: Kernel, amplitude: float = 2.0, mode: int = 1) -> Callable[[float], Field]:
    """Spatially constant ``w(t) = A cos(2 theta_k t)``, parametrically resonant with mode ``k``.

    The fastest smooth way to make the linearized energy grow: the growth
    rate is proportional to ``eps^p A``, with no dependence on cancellations.
    """
    th = float(kernel.theta(grid)[mode])
    return lambda t: Field.constant(grid, amplitude * np.cos(2.0 * th * t))


def random_pair(grid: Grid, seed: int = 0, modes: int = 6) -> tuple[Field, Field]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(2):
        c = np.zeros(grid.N // 2 + 1, dtype=complex)
        k = np.arange(1, modes + 1)
        c[1 : modes + 1] = (rng.normal(size=modes) + 1j * rng.normal(size=modes)) / k**2
        c[0] = rng.normal()
        out.append(Field(grid, irspec(c, grid)))
    return out[0], out[1]


def linearized_growth_fit(
    w,
    kernel: Kernel,
    s: float,
    p: int,
    eps_list: Sequence[float],
    tau_end: float = 6.0,
    g=None,
    dt_t: float = 0.05,
    record_every: int = 20,
    seed: int = 0,
) -> list[GrowthFit]:
    """Least-squares slope of ``log E_s`` against unscaled ``t`` for each eps.

    ``w`` is a Field or a callable of unscaled time ``t``. The linearized
    system is solved in ``tau`` with step ``eps^p dt_t`` up to ``tau_end``
    (horizon ``tau_end / eps^p`` in ``t``); ``f = 0``.
    """
    out = []
    for eps in eps_list:
        prm = EvolutionParams(kernel, eps, p, s)
        ep = prm.eps_p
        if isinstance(w, Field):
            grid, w_tau = w.grid, w
        else:
            grid = None
            w_tau = lambda tau, ep=ep: w(tau / ep)  # noqa: E731
        if g is None:
            grid = grid or w(0.0).grid
            g0 = random_pair(grid, seed)
        else:
            g0 = g
        n = int(round(tau_end / (ep * dt_t)))
        dtau = tau_end / n
        traj = solve_linearized(w_tau, None, g0, prm, tau_end, dtau, record_every=record_every)
        ts = traj.taus / ep
        es = np.array(
            [
                energy_Es(st, w_tau if isinstance(w_tau, Field) else w_tau(tau), eps, p, s).Es
                for st, tau in zip(traj.states, traj.taus)
            ]
        )
        kappa = float(np.polyfit(ts, np.log(es), 1)[0])
        out.append(GrowthFit(float(eps), p, kappa, ts, es))
    return out


# ---------------------------------------------------------------------------
# convergence


@dataclass(frozen=True)
class ConvergenceProblem:
    state: State
    prm: EvolutionParams
    t_end: float


def default_problem(L: float = 20.0, N: int = 512, epsilon: float = 0.1, p: int = 1,
                    kernel: str = "dirac", t_end: float = 2.0, nonlinear: bool = True) -> ConvergenceProblem:
    g = make_grid(L, N)
    return ConvergenceProblem(gaussian_state(g), EvolutionParams(builtin_kernel(kernel), epsilon, p, nonlinear=nonlinear), t_end)


@dataclass(frozen=True)
class ConvergenceResult:
    method: str
    dts: tuple
    differences: tuple
    orders: tuple

    @property
    def order(self) -> float:
        return self.orders[-1]


def convergence_study(problem: ConvergenceProblem, dt_list: Sequence[float], method: str = "strang") -> ConvergenceResult:
    """Self-convergence: ``d_i`` = max-norm of ``y_{h_i} - y_{h_{i+1}}`` and orders ``log2(d_i / d_{i+1})``."""
    dts = [float(d) for d in dt_list]
    if len(dts) < 4:
        raise ConfigurationError("dt_list needs at least 4 entries", key="dt")
    for a, b in zip(dts, dts[1:]):
        if abs(a / b - 2.0) > 1e-9:
            raise ConfigurationError("dt_list must be a halving sequence", key="dt")
    eng = engine(problem.state.grid, problem.prm)
    step = getattr(eng, method)
    g = problem.state.grid
    finals = []
    for h in dts:
        n = int(round(problem.t_end / h))
        if abs(n * h - problem.t_end) > 1e-9 * max(1.0, problem.t_end):
            raise ConfigurationError("t_end must be a multiple of every dt", key="dt")
        U, V = problem.state.u.rspectrum, problem.state.v.rspectrum
        for _ in range(n):
            U, V = step(U, V, h)
        finals.append(_state(g, U, V, problem.t_end))
    diffs = [
        float(np.hypot((a.u - b.u).max_abs(), (a.v - b.v).max_abs())) for a, b in zip(finals, finals[1:])
    ]
    with np.errstate(divide="ignore", invalid="ignore"):
        orders = [float(np.log2(d0 / d1)) for d0, d1 in zip(diffs, diffs[1:])]
    return ConvergenceResult(method, tuple(dts), tuple(diffs), tuple(orders))
