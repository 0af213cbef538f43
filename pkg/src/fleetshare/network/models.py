"""Parallel-route network and flow vectors."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

from fleetshare.errors import DimensionMismatchError
from fleetshare.network.delays import DelayFunction

__all__ = ["Network", "FlowVector"]


@dataclass(frozen=True)
class Network:
    """One origin-destination pair joined by R parallel routes.

    Attributes
    ----------
    routes : tuple[DelayFunction, ...]
        Delay function per route (R >= 1).
    demand : float
        Total flow per period (>= 0).
    """

    routes: tuple[DelayFunction, ...]
    demand: float

    def __post_init__(self) -> None:
        """Validate routes and demand."""
        if not self.routes:
            raise ValueError("network needs at least one route")
        if self.demand < 0:
            raise ValueError(f"demand must be >= 0, got {self.demand}")

    @property
    def route_count(self) -> int:
        """Number of routes R."""
        return len(self.routes)

    def with_demand(self, demand: float) -> Network:
        """Return the same routes with a different demand."""
        return Network(routes=self.routes, demand=demand)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {"demand": self.demand, "routes": [route.to_dict() for route in self.routes]}


@dataclass(frozen=True)
class FlowVector:
    """Per-route flows.

    Attributes
    ----------
    flows : tuple[float, ...]
        Non-negative flow per route.
    """

    flows: tuple[float, ...]

    def __post_init__(self) -> None:
        """Validate flows."""
        if any(q < 0 for q in self.flows):
            raise ValueError(f"flows must be >= 0, got {self.flows}")

    @classmethod
    def of(cls, flows: Sequence[float]) -> FlowVector:
        """Build from any float sequence."""
        return cls(tuple(float(q) for q in flows))

    @property
    def total(self) -> float:
        """Sum of flows."""
        return sum(self.flows)

    def __len__(self) -> int:
        return len(self.flows)

    def __getitem__(self, index: int) -> float:
        return self.flows[index]

    def check_dimension(self, network: Network) -> None:
        """Raise if the vector length differs from the route count."""
        if len(self.flows) != network.route_count:
            raise DimensionMismatchError(
                f"{len(self.flows)} flows given for {network.route_count} routes"
            )
