"""Exception hierarchy for the stirsap package."""


class StirsapError(Exception):
    """Base class for all package errors."""


class ConfigError(StirsapError, ValueError):
    """A configuration value violates an invariant."""


class ParseError(ConfigError):
    """A config file could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DomainError(StirsapError, ValueError):
    """A time argument lies outside the protocol window."""


class DegeneratePulseError(StirsapError, ValueError):
    """Both Raman pulses vanish where a finite drive is required."""


class SingularityError(StirsapError, ValueError):
    """The effective Rabi frequency vanishes at an interior grid point."""

    def __init__(self, message: str, time: float | None = None):
        self.time = time
        super().__init__(message)


class ContractError(StirsapError, TypeError):
    """An argument does not satisfy an operation's contract (dimension,
    grid mismatch, or a missing derived quantity)."""


class IntegrationError(StirsapError, RuntimeError):
    """Propagation failed to converge; carries the last population residual."""

    def __init__(self, message: str, residual: float | None = None):
        self.residual = residual
        super().__init__(message)


class SearchError(StirsapError, RuntimeError):
    """A bisection search could not bracket its target."""
