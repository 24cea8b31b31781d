"""Exception types shared by every module in the package."""


class RsmaDenseError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(RsmaDenseError):
    """Malformed or inconsistent configuration input."""


class DomainError(RsmaDenseError):
    """An argument lies outside the mathematical domain of an operation."""


class NoConvergence(RsmaDenseError):
    """An iterative routine exhausted its budget.

    The best available value and its error estimate are attached so callers
    can decide whether the partial result is still usable.
    """

    def __init__(self, message, value=None, error_estimate=None):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


class SingularChannel(RsmaDenseError):
    """A sampled channel matrix is too ill-conditioned to zero-force."""


class InsufficientWindow(RsmaDenseError):
    """The simulation window is too small for the requested geometry."""


class BracketError(RsmaDenseError):
    """A root- or maximum-bracketing interval does not contain a sign change."""
