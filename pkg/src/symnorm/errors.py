"""Exception hierarchy shared by every module."""


class SymnormError(Exception):
    """Base class for all errors raised by the package."""


class DomainError(SymnormError, ValueError):
    """Input outside the mathematical domain of an operation."""


class ConfigError(SymnormError, ValueError):
    """A parameter (p, k, q, ...) is out of its admissible range."""


class ResourceError(SymnormError):
    """An exact enumeration would exceed its guard; use Monte Carlo instead."""


class ConvergenceError(SymnormError):
    """An iterative scheme stopped before reaching its tolerance."""

    def __init__(self, message: str, deviation: float):
        super().__init__(message)
        self.deviation = deviation


class NumericError(SymnormError):
    """Quadrature or another numerical routine failed its accuracy target."""
