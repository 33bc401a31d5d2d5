"""Single simulation runs with escape detection and sampled diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .diagnostics import energy_Es, hamiltonian, linearization_weight
from .dynamics import EvolutionParams, State, _state, default_dt, engine
from .errors import ConfigurationError, HyperbolicityLost
from .spectral import rnorm

__all__ = ["RunReport", "simulate", "ESCAPE_FACTOR", "DIAGNOSTIC_COLUMNS"]

ESCAPE_FACTOR = 10.0
DIAGNOSTIC_COLUMNS = ("t", "Xs_norm", "Hs_u", "Hs_v", "hamiltonian", "Es", "escaped")


@dataclass
class RunReport:
    """Sampled diagnostics of one run.

    ``escape_time`` is the first step time at which the ``X^s`` norm exceeded
    ``M * max(1, initial norm)`` or a sample went non-finite; ``inf`` if
    the run reached ``t_end``.
    """

    s: float
    epsilon: float
    p: int
    dt: float
    threshold: float
    rows: list = field(default_factory=list)
    escape_time: float = float("inf")
    blowup: bool = False
    hyperbolic_min: float = 1.0
    final: State | None = field(default=None, repr=False)
    snapshots: dict = field(default_factory=dict, repr=False)

    @property
    def escaped(self) -> bool:
        return np.isfinite(self.escape_time)

    def column(self, name: str) -> np.ndarray:
        i = DIAGNOSTIC_COLUMNS.index(name)
        return np.array([r[i] for r in self.rows], dtype=float)


def _row(st: State, prm: EvolutionParams, escaped: bool):
    # overflow in the diagnostics of a huge state is reported as inf, not raised
    with np.errstate(over="ignore", invalid="ignore"):
        return _row_values(st, prm, escaped)


def _row_values(st: State, prm: EvolutionParams, escaped: bool):
    g, s, p = st.grid, prm.s, prm.p
    hu, hv = rnorm(st.u.rspectrum, g, s), rnorm(st.v.rspectrum, g, s)
    H = hamiltonian(st, prm.epsilon, p, nonlinear=prm.nonlinear)
    w = linearization_weight(st.u, p)
    try:
        es = energy_Es(st, w, prm.epsilon if prm.nonlinear else 0.0, p, s).Es
    except HyperbolicityLost:
        es = float("nan")
    hmin = float(np.min(1.0 + prm.coupling * w.samples))
    return (st.t, float(np.hypot(hu, hv)), hu, hv, H, es, int(escaped)), hmin


def simulate(
    st: State,
    prm: EvolutionParams,
    t_end: float,
    dt: float | None = None,
    method: str = "strang",
    sample_every: float | None = None,
    M: float = ESCAPE_FACTOR,
    snapshot_times=(),
    diagnostics: bool = True,
) -> RunReport:
    """Integrate until ``t_end`` or escape, sampling diagnostics every ``sample_every``.

    Escape is checked after every step (the norm is evaluated in spectral
    space, no transforms needed). The run stops at the first escape.
    """
    if method not in ("strang", "rk4"):
        raise ConfigurationError(f"method must be strang or rk4, got {method!r}", key="method")
    if not M > 0:
        raise ConfigurationError("escape factor M must be positive", key="M")
    g, s = st.grid, prm.s
    if dt is None:
        dt = default_dt(g, prm, st.u.max_abs())
        if sample_every is not None:
            # shrink so that sample times fall on steps
            dt = sample_every / np.ceil(sample_every / dt - 1e-9)
    if not dt > 0:
        raise ConfigurationError("dt must be positive", key="dt")
    n = int(np.ceil((t_end - st.t) / dt - 1e-9))
    every = n + 1 if sample_every is None else max(1, int(round(sample_every / dt)))
    snap_steps = {int(round((ts - st.t) / dt)): ts for ts in snapshot_times}

    eng = engine(g, prm)
    step = eng.strang if method == "strang" else eng.rk4
    U, V = st.u.rspectrum, st.v.rspectrum
    with np.errstate(over="ignore"):
        x0 = float(np.hypot(rnorm(U, g, s), rnorm(V, g, s)))
    rep = RunReport(s=s, epsilon=prm.epsilon, p=prm.p, dt=dt, threshold=M * max(1.0, x0))

    def record(state, escaped):
        if diagnostics:
            row, hmin = _row(state, prm, escaped)
            rep.rows.append(row)
            rep.hyperbolic_min = min(rep.hyperbolic_min, hmin)

    record(st, False)
    if 0 in snap_steps:
        rep.snapshots[snap_steps[0]] = st
    cur = st
    t_last = st.t
    for i in range(1, n + 1):
        h = dt if i < n else t_end - (st.t + (n - 1) * dt)
        t = st.t + i * dt if i < n else t_end
        with np.errstate(all="ignore"):
            U, V = step(U, V, h)
            finite = bool(np.all(np.isfinite(U)) and np.all(np.isfinite(V)))
            xn = float(np.hypot(rnorm(U, g, s), rnorm(V, g, s))) if finite else float("inf")
        if not finite or xn > rep.threshold:
            rep.escape_time = t
            rep.blowup = not finite
            if finite:
                cur = _state(g, U, V, t)
                record(cur, True)
            break
        t_last = t
        if i % every == 0 or i == n or i in snap_steps:
            cur = _state(g, U, V, t)
            if i % every == 0 or i == n:
                record(cur, False)
            if i in snap_steps:
                rep.snapshots[snap_steps[i]] = cur
    rep.final = cur if rep.blowup else _state(g, U, V, rep.escape_time if rep.escaped else t_last)
    return rep
