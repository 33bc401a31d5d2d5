"""Command-line entry point: ``nlwave --config run.cfg [--command c] [--out dir] [--seed n]``.

Exit status 0 on success, 1 on configuration errors, 2 on runtime errors
or escape/blow-up. Outputs other than ``metadata.json`` are deterministic
given the config and seed.
"""

from __future__ import annotations

import argparse
import dataclasses
import datetime as _dt
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig, echo_config, parse_config
from .dynamics import EvolutionParams, State
from .errors import ConfigurationError
from .experiments import lattice_crosscheck, linearized_growth_fit, longtime_sweep, random_pair, resonant_pump
from .io import fmt, read_snapshot, write_diagnostics, write_json, write_snapshot, write_sweep
from .kernels import Kernel, builtin_kernel, load_kernel_csv, validate_kernel
from .nashmoser import nash_moser_params, optimize_pmin
from .probes import DEFAULT_BAND, PROBES, probe_suite
from .spectral import Field, make_grid
from .trajectory import simulate

__all__ = ["main", "run", "RunOutcome"]


@dataclasses.dataclass
class RunOutcome:
    status: int
    summary: dict


def _kernel(cfg: RunConfig) -> Kernel:
    if cfg.kernel.endswith(".csv"):
        return load_kernel_csv(cfg.kernel)
    return builtin_kernel(cfg.kernel)


def _initial(cfg: RunConfig) -> State:
    if cfg.initial == "snapshot":
        st = read_snapshot(cfg.snapshot)
        if not isinstance(st, State):
            st = State(st[0], Field.zeros(st[0].grid))
        if (st.grid.L, st.grid.N) != (cfg.L, cfg.N):
            raise ConfigurationError(
                f"snapshot grid (L={st.grid.L}, N={st.grid.N}) differs from config (L={cfg.L}, N={cfg.N})",
                key="snapshot",
            )
        return st.with_time(0.0)
    g = make_grid(cfg.L, cfg.N)
    a = cfg.amplitude
    shapes = {
        "gaussian": lambda x: a * np.exp(-(x**2)),
        "sech": lambda x: a / np.cosh(x) ** 2,
        "sine": lambda x: a * np.sin(np.pi * x / cfg.L),
        "zero": lambda x: 0.0 * x,
    }
    return State(Field.from_function(g, shapes[cfg.initial]), Field.zeros(g))


def _params(cfg: RunConfig, kernel: Kernel, eps: float | None = None) -> EvolutionParams:
    return EvolutionParams(kernel, cfg.epsilon if eps is None else eps, cfg.p, cfg.s)


def _cmd_validate_kernel(cfg, out):
    rep = validate_kernel(_kernel(cfg), make_grid(cfg.L, cfg.N))
    return 0, {"kernel": cfg.kernel, **dataclasses.asdict(rep)}


def _cmd_simulate(cfg, out):
    kernel = _kernel(cfg)
    st = _initial(cfg)
    prm = _params(cfg, kernel)
    rep = simulate(st, prm, cfg.t_end, dt=cfg.dt, method=cfg.method, sample_every=cfg.sample_every,
                   M=cfg.M, snapshot_times=cfg.snapshot_times)
    write_diagnostics(out / "diagnostics.csv", rep)
    for t, snap in sorted(rep.snapshots.items()):
        write_snapshot(out / f"snapshot_t={fmt(t)}.csv", snap)
    summary = {
        "dt": rep.dt,
        "t_end": cfg.t_end,
        "escaped": rep.escaped,
        "escape_time": rep.escape_time,
        "blowup": rep.blowup,
        "threshold": rep.threshold,
        "hyperbolic_min": rep.hyperbolic_min,
        "final_Xs_norm": rep.final.x_norm(cfg.s) if not rep.blowup else float("nan"),
        "samples": len(rep.rows),
    }
    return (2 if rep.escaped else 0), summary


def _cmd_sweep(cfg, out):
    kernel = _kernel(cfg)
    st = _initial(cfg)
    res = longtime_sweep(st, kernel, cfg.p, cfg.s, cfg.eps_list, T_cap=cfg.T_cap, M=cfg.M, dt=cfg.dt,
                         workers=cfg.workers)
    write_sweep(out / "sweep.csv", res)
    prods = [r.product for r in res]
    return 0, {
        "products": prods,
        "spread": max(prods) / min(prods),
        "min_scaled_escape": min(prods),
        "cap_hits": sum(r.cap_hit for r in res),
    }


def _cmd_linearized(cfg, out):
    kernel = _kernel(cfg)
    g = make_grid(cfg.L, cfg.N)
    w = resonant_pump(g, kernel)
    fits = linearized_growth_fit(w, kernel, cfg.s, cfg.p, cfg.eps_list, tau_end=cfg.tau_end,
                                 g=random_pair(g, cfg.seed))
    lines = ["epsilon,p,kappa"] + [f"{fmt(f.epsilon)},{f.p},{fmt(f.kappa)}" for f in fits]
    (out / "growth.csv").write_text("\n".join(lines) + "\n")
    ratios = [a.kappa / b.kappa for a, b in zip(fits, fits[1:])]
    return 0, {"kappa": [f.kappa for f in fits], "ratios": ratios, "eps_list": list(cfg.eps_list)}


def _cmd_probes(cfg, out):
    g = make_grid(cfg.L, cfg.N)
    band = min(DEFAULT_BAND, cfg.N // 4 - 1)
    reports = []
    for name in PROBES:
        p = max(cfg.p, 2) if name == "N_uu" else cfg.p
        rep = probe_suite(name, g, samples=cfg.samples, seed=cfg.seed, s=cfg.s, p=p, band=band,
                          workers=cfg.workers)
        reports.append(dataclasses.asdict(rep))
    write_json(out / "probes.json", reports)
    return 0, {"empirical_C": {r["probe"]: r["empirical_C"] for r in reports},
               "all_finite": all(r["all_finite"] for r in reports)}


def _cmd_crosscheck(cfg, out):
    g = make_grid(cfg.L, cfg.N)
    st = _initial(cfg)
    if st.grid != g:
        raise ConfigurationError("initial data grid differs from config grid", key="snapshot")
    lin = lattice_crosscheck(st.u, st.v, cfg.p, cfg.epsilon, 10.0, nonlinear=False)
    nl = lattice_crosscheck(st.u, st.v, cfg.p, cfg.epsilon, 5.0)
    lines = ["case,t_end,dt,deviation"]
    for case, t_end, res in (("linear", 10.0, lin), ("nonlinear", 5.0, nl)):
        lines += [f"{case},{fmt(t_end)},{fmt(h)},{fmt(d)}" for h, d in zip(res.dts, res.deviations)]
    (out / "crosscheck.csv").write_text("\n".join(lines) + "\n")
    return 0, {"linear_deviation": lin.final, "nonlinear_deviation": nl.final}


def _cmd_nashmoser(cfg, out):
    D, P = optimize_pmin()
    return 0, {"D_star": D, "P_star": P, "P_min_at_6": nash_moser_params(6.0).P_min}


COMMANDS = {
    "validate-kernel": _cmd_validate_kernel,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "linearized": _cmd_linearized,
    "probes": _cmd_probes,
    "crosscheck": _cmd_crosscheck,
    "nashmoser": _cmd_nashmoser,
}


def _error_record(exc: Exception) -> dict:
    rec = {"error": type(exc).__name__, "message": str(exc)}
    for attr in ("key", "line", "t", "xi"):
        if getattr(exc, attr, None) is not None:
            rec[attr] = getattr(exc, attr)
    return rec


def run(cfg: RunConfig, out) -> RunOutcome:
    """Execute ``cfg.command``, writing ``summary.json`` and the command's files into ``out``."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.echo").write_text(echo_config(cfg))
    write_json(out / "metadata.json", {
        "version": __version__,
        "created": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "config": dataclasses.asdict(cfg),
    })
    try:
        status, summary = COMMANDS[cfg.command](cfg, out)
    except (ConfigurationError, OSError) as exc:
        # unreadable kernel or snapshot files are configuration problems
        status, summary = 1, _error_record(exc)
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        status, summary = 2, _error_record(exc)
    summary = {"command": cfg.command, "seed": cfg.seed, "status": status, **summary}
    # escape is data (summary.json, status 2); exceptions go to error.json
    write_json(out / ("error.json" if "error" in summary else "summary.json"), summary)
    return RunOutcome(status, summary)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="nlwave", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="key = value config file (optional; defaults otherwise)")
    ap.add_argument("--command", choices=sorted(COMMANDS))
    ap.add_argument("--out", default="out")
    ap.add_argument("--seed", type=int)
    args = ap.parse_args(argv)
    try:
        text = Path(args.config).read_text() if args.config else ""
        cfg = parse_config(text, command=args.command, seed=args.seed)
    except (ConfigurationError, OSError) as exc:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_json(out / "error.json", {"status": 1, **_error_record(exc)})
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    res = run(cfg, args.out)
    if res.status:
        print(f"{cfg.command}: exit {res.status}: {res.summary.get('message', 'escape detected')}", file=sys.stderr)
    return res.status


if __name__ == "__main__":
    sys.exit(main())
