"""Line-oriented ``key = value`` run configuration."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

from .dynamics import S0
from .errors import ConfigurationError
from .kernels import BUILTIN_KERNELS

__all__ = ["RunConfig", "COMMANDS", "INITIAL_SHAPES", "parse_config", "echo_config"]

COMMANDS = ("validate-kernel", "simulate", "sweep", "linearized", "probes", "crosscheck", "nashmoser")
INITIAL_SHAPES = ("gaussian", "sech", "sine", "zero", "snapshot")
METHODS = ("strang", "rk4")

# the lattice stencil needs 1/dx integer; L = 16 with the default N gives dx = 1/16
COMMAND_DEFAULTS = {"crosscheck": {"L": 16.0}}


@dataclass(frozen=True)
class RunConfig:
    command: str = "simulate"
    kernel: str = "dirac"
    L: float = 20.0
    N: int = 512
    epsilon: float = 0.1
    p: int = 1
    s: float = 2.0
    dt: float | None = None
    t_end: float = 10.0
    T_cap: float = 5.0
    M: float = 10.0
    seed: int = 0
    method: str = "strang"
    initial: str = "gaussian"
    amplitude: float = 1.0
    snapshot: str = ""
    sample_every: float = 1.0
    snapshot_times: tuple = ()
    eps_list: tuple = (0.2, 0.1, 0.05)
    tau_end: float = 6.0
    samples: int = 1000
    workers: int = 1


def _float(v: str) -> float:
    x = float(v)
    if not math.isfinite(x):
        raise ValueError("not finite")
    return x


def _int(v: str) -> int:
    x = float(v)
    if x != int(x):
        raise ValueError("not an integer")
    return int(x)


def _opt_float(v: str):
    return None if v.strip().lower() in ("auto", "none", "") else _float(v)


def _float_list(v: str) -> tuple:
    return tuple(_float(t) for t in v.split(",") if t.strip())


_PARSERS = {
    "command": str,
    "kernel": str,
    "L": _float,
    "N": _int,
    "epsilon": _float,
    "p": _int,
    "s": _float,
    "dt": _opt_float,
    "t_end": _float,
    "T_cap": _float,
    "M": _float,
    "seed": _int,
    "method": str,
    "initial": str,
    "amplitude": _float,
    "snapshot": str,
    "sample_every": _float,
    "snapshot_times": _float_list,
    "eps_list": _float_list,
    "tau_end": _float,
    "samples": _int,
    "workers": _int,
}


def _check(key: str, cfg: RunConfig):
    """Precondition for one field; returns an error message or None."""
    v = getattr(cfg, key)
    if key == "command" and v not in COMMANDS:
        return f"command must be one of {', '.join(COMMANDS)}"
    if key == "kernel" and v not in BUILTIN_KERNELS and not v.endswith(".csv"):
        return f"kernel must be one of {', '.join(sorted(BUILTIN_KERNELS))} or a .csv path"
    if key == "N":
        if v % 2:
            return "N must be even"
        if v < 8:
            return "N must be >= 8"
    if key in ("L", "epsilon", "t_end", "T_cap", "M", "sample_every", "tau_end") and not v > 0:
        return f"{key} must be positive"
    if key == "dt" and v is not None and not v > 0:
        return "dt must be positive"
    if key == "p" and v < 1:
        return "p must be a positive integer"
    if key == "s" and v < S0 + 1 - 1e-12:
        return f"s must be >= s0 + 1 = {S0 + 1}"
    if key == "method" and v not in METHODS:
        return "method must be strang or rk4"
    if key == "initial" and v not in INITIAL_SHAPES:
        return f"initial must be one of {', '.join(INITIAL_SHAPES)}"
    if key in ("samples", "workers") and v < 1:
        return f"{key} must be >= 1"
    if key == "seed" and v < 0:
        return "seed must be nonnegative"
    if key == "eps_list" and (not v or min(v) <= 0):
        return "eps_list must be a nonempty list of positive numbers"
    if key == "snapshot_times" and any(t < 0 for t in v):
        return "snapshot_times must be nonnegative"
    return None


def parse_config(text: str, **overrides) -> RunConfig:
    """Parse ``key = value`` lines (``#`` starts a comment).

    ``overrides`` (e.g. ``command`` or ``seed`` from the command line) take
    precedence over the file. Errors name the key and, for file entries,
    the line.
    """
    values: dict = {}
    lines: dict = {}
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"expected 'key = value', got {raw.strip()!r}", line=no)
        key, val = (t.strip() for t in line.split("=", 1))
        if key not in _PARSERS:
            raise ConfigurationError(f"unknown key {key!r}", key=key, line=no)
        if key in values:
            raise ConfigurationError(f"duplicate key {key!r}", key=key, line=no)
        try:
            values[key] = _PARSERS[key](val)
        except ValueError:
            raise ConfigurationError(f"bad value {val!r} for {key}", key=key, line=no) from None
        lines[key] = no
    for key, val in overrides.items():
        if val is None:
            continue
        if key not in _PARSERS:
            raise ConfigurationError(f"unknown key {key!r}", key=key)
        values[key] = val
        lines.pop(key, None)
    command = values.get("command", RunConfig.command)
    for key, val in COMMAND_DEFAULTS.get(command, {}).items():
        values.setdefault(key, val)
    cfg = replace(RunConfig(), **values)
    for f in fields(RunConfig):
        msg = _check(f.name, cfg)
        if msg:
            raise ConfigurationError(msg, key=f.name, line=lines.get(f.name))
    if cfg.initial == "snapshot" and not cfg.snapshot:
        raise ConfigurationError("initial = snapshot needs a snapshot path", key="snapshot", line=lines.get("initial"))
    return cfg


def _show(v) -> str:
    if v is None:
        return "auto"
    if isinstance(v, tuple):
        return ", ".join(repr(float(x)) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def echo_config(cfg: RunConfig) -> str:
    """Every field as ``key = value``; re-parses to an equal RunConfig."""
    return "\n".join(f"{f.name} = {_show(getattr(cfg, f.name))}" for f in fields(RunConfig)) + "\n"
