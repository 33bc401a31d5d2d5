"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid parameters or configuration input."""

    def __init__(self, message, key=None, line=None):
        self.key = key
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ContractError(RuntimeError):
    """An operation was given inputs that violate its stated contract."""


class NonElliptic(ValueError):
    """The kernel symbol vanishes (numerically) on the resolved band."""

    def __init__(self, message, xi=None):
        self.xi = xi
        super().__init__(message)


class BlowupDetected(RuntimeError):
    """Non-finite values appeared during time stepping."""

    def __init__(self, t, message="non-finite value in state"):
        self.t = t
        super().__init__(f"{message} at t={t!r}")


class HyperbolicityLost(ValueError):
    """The energy functional is not positive for this (epsilon, w)."""

    def __init__(self, energy_squared):
        self.energy_squared = energy_squared
        super().__init__(f"E_s^2 = {energy_squared!r} < 0; epsilon too large for this w")


class UndefinedRatio(ValueError):
    """A probe ratio has a zero denominator."""
