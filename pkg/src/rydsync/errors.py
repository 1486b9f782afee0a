"""Exception types shared across the package."""


class RydsyncError(Exception):
    """Base class for all package errors."""


class DomainError(RydsyncError, ValueError):
    """Invalid physical input (non-finite state, bad parameter)."""


class IntegrationError(RydsyncError, RuntimeError):
    """Adaptive integration failed (stiffness / step underflow / NaN).

    Carries the time at which the failure occurred.
    """

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class SingularSystemError(RydsyncError, RuntimeError):
    """The frozen-shift steady-state linear system is (near-)singular."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class AnalysisError(RydsyncError, ValueError):
    """Signal analysis input does not meet the preconditions."""


class ConfigError(RydsyncError, ValueError):
    """Scenario / config file validation failure."""
