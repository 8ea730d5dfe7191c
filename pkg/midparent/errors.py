"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
@description: exception hierarchy

All errors derive from AssertionError.
"""

from typing import Any, List, Optional


class SolverError(AssertionError):
    """Base class for every failure raised by midparent.

    :param message: human readable description
    :type message: str
    :param stage: computation stage that failed, defaults to None
    :type stage: Optional[str]
    """

    def __init__(self, message: str, stage: Optional[str] = None):
        super().__init__(message)
        self.stage = stage

    def __str__(self) -> str:
        message = super().__str__()
        if self.stage is None:
            return message
        return f"[{self.stage}] {message}"


class ConfigurationError(SolverError):
    """Invalid configuration value or missing configuration key."""


class InputError(SolverError):
    """Invalid input data (non-finite samples, empty densities)."""


class NumericalError(SolverError):
    """Overflow, non-finite integrand or non-convergence.

    :param message: human readable description
    :type message: str
    :param stage: computation stage that failed, defaults to None
    :type stage: Optional[str]
    :param trace: residual history, defaults to None
    :type trace: Optional[List[Any]]
    """

    def __init__(
        self, message: str, stage: Optional[str] = None, trace: Optional[List[Any]] = None
    ):
        super().__init__(message, stage)
        self.trace = [] if trace is None else list(trace)


class CompatibilityError(SolverError):
    """Non-positive logarithm argument, i.e., m(z0) >= 1 + inf m."""


class EpsilonTooLarge(SolverError):
    """Deviation scale outside the contraction regime.

    The stage tells which estimate broke: "cap", "gamma", "contraction" or
    "ball".
    """


class SeriesError(SolverError):
    """Dilation series applied to a function with nonzero slope at origin."""


class MortalityError(SolverError):
    """Mortality model rejected by validation.

    :param message: human readable description
    :type message: str
    :param z: first offending trait value, defaults to None
    :type z: Optional[float]
    """

    def __init__(self, message: str, z: Optional[float] = None):
        super().__init__(message, "mortality")
        self.z = z


class StabilityError(SolverError):
    """Explicit time step produced a negative density."""
