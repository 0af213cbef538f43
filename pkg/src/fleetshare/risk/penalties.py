"""Convex out-of-schedule penalties with one-sided derivatives."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from typing import Protocol, runtime_checkable

from fleetshare.risk.models import PenaltySpec

__all__ = [
    "ConvexPenalty",
    "LinearSchedulePenalty",
    "QuadraticPenalty",
    "AbsolutePenalty",
    "CallablePenalty",
]


@runtime_checkable
class ConvexPenalty(Protocol):
    """Convex penalty π of arrival lateness with π(0) = 0 and π ≥ 0."""

    def value(self, lateness: float) -> float:
        """Return π(x)."""
        ...

    def left_derivative(self, lateness: float) -> float:
        """Return π'_−(x)."""
        ...

    def right_derivative(self, lateness: float) -> float:
        """Return π'_+(x)."""
        ...


@dataclass(frozen=True)
class LinearSchedulePenalty:
    """θ_LAP [x]^+ + θ_EAP [−x]^+."""

    theta_lap: float
    theta_eap: float

    @classmethod
    def from_spec(cls, spec: PenaltySpec) -> LinearSchedulePenalty:
        """Build from a :class:`PenaltySpec`."""
        return cls(spec.theta_lap, spec.theta_eap)

    def value(self, lateness: float) -> float:
        return self.theta_lap * max(lateness, 0.0) + self.theta_eap * max(-lateness, 0.0)

    def left_derivative(self, lateness: float) -> float:
        return self.theta_lap if lateness > 0 else -self.theta_eap

    def right_derivative(self, lateness: float) -> float:
        return self.theta_lap if lateness >= 0 else -self.theta_eap


@dataclass(frozen=True)
class QuadraticPenalty:
    """scale · x²."""

    scale: float = 1.0

    def value(self, lateness: float) -> float:
        return self.scale * lateness * lateness

    def left_derivative(self, lateness: float) -> float:
        return 2.0 * self.scale * lateness

    def right_derivative(self, lateness: float) -> float:
        return 2.0 * self.scale * lateness


@dataclass(frozen=True)
class AbsolutePenalty:
    """scale · |x|."""

    scale: float = 1.0

    def value(self, lateness: float) -> float:
        return self.scale * abs(lateness)

    def left_derivative(self, lateness: float) -> float:
        return self.scale if lateness > 0 else -self.scale

    def right_derivative(self, lateness: float) -> float:
        return self.scale if lateness >= 0 else -self.scale


@dataclass(frozen=True)
class CallablePenalty:
    """User-supplied penalty; derivatives default to one-sided differences.

    Attributes
    ----------
    func : Callable[[float], float]
        π.
    left : Callable[[float], float] | None
        π'_−, or None for a backward difference.
    right : Callable[[float], float] | None
        π'_+, or None for a forward difference.
    step : float
        Difference step.
    """

    func: Callable[[float], float]
    left: Callable[[float], float] | None = None
    right: Callable[[float], float] | None = None
    step: float = 1e-7

    def value(self, lateness: float) -> float:
        return float(self.func(lateness))

    def left_derivative(self, lateness: float) -> float:
        if self.left is not None:
            return float(self.left(lateness))
        return (self.func(lateness) - self.func(lateness - self.step)) / self.step

    def right_derivative(self, lateness: float) -> float:
        if self.right is not None:
            return float(self.right(lateness))
        return (self.func(lateness + self.step) - self.func(lateness)) / self.step
