"""Data models for schedule-delay risk."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

__all__ = ["PenaltySpec", "RiskResult"]


@dataclass(frozen=True)
class PenaltySpec:
    """Piecewise-linear early/late arrival penalty.

    An arrival x time units after the planned time costs θ_LAP · x when
    x > 0 and θ_EAP · |x| when x < 0.

    Attributes
    ----------
    theta_lap : float
        Late-arrival value of time.
    theta_eap : float
        Early-arrival value of time.
    """

    theta_lap: float
    theta_eap: float

    def __post_init__(self) -> None:
        """Validate values of time."""
        if self.theta_lap < 0 or self.theta_eap < 0:
            raise ValueError(
                f"values of time must be >= 0, got ({self.theta_lap}, {self.theta_eap})"
            )
        if self.theta_lap == 0 and self.theta_eap == 0:
            raise ValueError("at least one value of time must be positive")

    @property
    def critical_ratio(self) -> float:
        """θ_LAP / (θ_LAP + θ_EAP), the quantile level of the optimal offset."""
        return self.theta_lap / (self.theta_lap + self.theta_eap)

    def __call__(self, lateness: float) -> float:
        """Penalty for arriving ``lateness`` time units late (negative: early)."""
        if lateness > 0:
            return self.theta_lap * lateness
        return -self.theta_eap * lateness

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {"theta_lap": self.theta_lap, "theta_eap": self.theta_eap}


@dataclass(frozen=True)
class RiskResult:
    """Optimal departure offset and the resulting disutility.

    Attributes
    ----------
    rho : float
        Optimal offset ρ* (left end of the minimizer interval).
    risk : float
        Minimized expected penalty.
    total : float
        E[T] + risk.
    interval : tuple[float, float]
        All minimizers ``[ρ_lo, ρ_hi]``; degenerate when ρ* is unique.
    """

    rho: float
    risk: float
    total: float
    interval: tuple[float, float]

    @property
    def unique(self) -> bool:
        """Whether the minimizer is unique."""
        return self.interval[0] == self.interval[1]

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {
            "rho": self.rho,
            "risk": self.risk,
            "total": self.total,
            "interval": list(self.interval),
        }
