"""Pseudo-spectral laboratory for the nonlocal wave equation
``u_tt = beta * (u + eps^p u^{p+1})_xx`` on a periodic interval."""

from .dynamics import S0, EvolutionParams, State, integrate, linear_propagate, step_rk4, step_strang
from .errors import (
    BlowupDetected,
    ConfigurationError,
    ContractError,
    HyperbolicityLost,
    NonElliptic,
    UndefinedRatio,
)
from .kernels import Kernel, builtin_kernel, validate_kernel
from .spectral import Field, Grid, make_grid

__version__ = "0.1.0"

__all__ = [
    "S0",
    "EvolutionParams",
    "State",
    "integrate",
    "linear_propagate",
    "step_rk4",
    "step_strang",
    "BlowupDetected",
    "ConfigurationError",
    "ContractError",
    "HyperbolicityLost",
    "NonElliptic",
    "UndefinedRatio",
    "Kernel",
    "builtin_kernel",
    "validate_kernel",
    "Field",
    "Grid",
    "make_grid",
    "__version__",
]
