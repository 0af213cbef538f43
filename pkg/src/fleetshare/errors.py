"""Exception hierarchy for fleetshare.

A clean negative answer (an infeasible offer, a "No" market verdict) is a
return value. The exceptions below signal invalid input or a numerical
failure.
"""

from __future__ import annotations

from typing import Any

__all__ = [
    "FleetShareError",
    "NegativeWeightError",
    "MassOutOfRangeError",
    "NotDominatedError",
    "DimensionMismatchError",
    "NoConvergenceError",
    "IncompatibleProfileError",
    "GenerationMismatchError",
    "EqualTimesError",
    "NonIntegerFlowsError",
    "NotDoublyStochasticError",
    "RuleIncompleteError",
    "NotProbabilityError",
    "NonConvexPenaltyError",
    "InfeasibleOfferError",
    "ConfigError",
]


class FleetShareError(Exception):
    """Base class for all fleetshare errors."""


class NegativeWeightError(FleetShareError, ValueError):
    """Raised when a measure atom carries a negative weight."""


class MassOutOfRangeError(FleetShareError, ValueError):
    """Raised when a requested mass exceeds the mass available."""


class NotDominatedError(FleetShareError, ValueError):
    """Raised when subtracting a measure that is not below the minuend."""


class DimensionMismatchError(FleetShareError, ValueError):
    """Raised when vectors or matrices do not match the number of routes."""


class NoConvergenceError(FleetShareError, RuntimeError):
    """Raised when an iterative solver hits its iteration cap."""

    def __init__(self, message: str, iterations: int | None = None) -> None:
        """Initialize convergence error.

        Parameters
        ----------
        message : str
            Error message.
        iterations : int | None, optional
            Iterations performed before giving up.
        """
        super().__init__(message)
        self.iterations = iterations


class IncompatibleProfileError(FleetShareError, ValueError):
    """Raised when an offer profile's mass or mean does not match the routing."""


class GenerationMismatchError(FleetShareError, ValueError):
    """Raised when a simplex measure does not generate a profile's distribution."""


class EqualTimesError(FleetShareError, ValueError):
    """Raised when a two-route plan is requested for two equal travel times.

    The plan is not unique in that case; ``fallback`` holds the proportional
    plan so callers may still use it.
    """

    def __init__(self, message: str, fallback: Any = None) -> None:
        """Initialize equal-times error.

        Parameters
        ----------
        message : str
            Error message.
        fallback : AssignmentPlan | None, optional
            A valid (non-unique) plan.
        """
        super().__init__(message)
        self.fallback = fallback


class NonIntegerFlowsError(FleetShareError, ValueError):
    """Raised when a schedule is requested for non-integer route flows."""


class NotDoublyStochasticError(FleetShareError, ValueError):
    """Raised when a matrix is not doubly stochastic within tolerance."""


class RuleIncompleteError(FleetShareError, ValueError):
    """Raised when a mixed-routing assignment rule misses a driver or component."""


class NotProbabilityError(FleetShareError, ValueError):
    """Raised when a distribution does not have unit mass."""


class NonConvexPenaltyError(FleetShareError, ValueError):
    """Raised when a penalty function fails the midpoint convexity check."""


class InfeasibleOfferError(FleetShareError):
    """Raised when no offer profile can keep every driver in the fleet."""


class ConfigError(FleetShareError, ValueError):
    """Raised when a scenario or input file is invalid."""

    def __init__(self, message: str, path: str | None = None) -> None:
        """Initialize configuration error.

        Parameters
        ----------
        message : str
            Error message.
        path : str | None, optional
            Dotted path of the offending field (e.g. ``"network.routes[0].b"``).
        """
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
