"""Exception hierarchy shared by the library and the command line front end."""
from __future__ import annotations


class StaOttoError(Exception):
    """Base class for every error raised by this package."""


class ParameterDomainError(StaOttoError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class TrapInversionError(StaOttoError):
    """An effective squared frequency became non-positive (repulsive trap).

    ``t`` is the first offending time inside the stroke, when known.
    """

    def __init__(self, message: str, t: float | None = None):
        super().__init__(message)
        self.t = t


class TrapCollapseError(StaOttoError):
    """The Ermakov scaling function reached zero."""

    def __init__(self, message: str, t: float | None = None):
        super().__init__(message)
        self.t = t


class QuadratureError(StaOttoError):
    """Panel doubling did not reach the requested relative tolerance."""

    def __init__(self, message: str, estimates: tuple[float, float]):
        super().__init__(message)
        self.estimates = estimates


class ConvergenceError(StaOttoError):
    """Step doubling changed an ODE result by more than the allowed amount."""

    def __init__(self, message: str, values: tuple[float, float]):
        super().__init__(message)
        self.values = values


class ConfigError(StaOttoError):
    """Malformed or out-of-domain configuration; ``key`` names the culprit."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key
