"""Data models for routings, offer profiles and assignment plans."""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt

from fleetshare.errors import DimensionMismatchError, IncompatibleProfileError
from fleetshare.measures.discrete import (
    DECISION_TOL,
    MASS_TOL,
    DiscreteMeasure,
    canonicalize,
    partial_expectation,
)

__all__ = [
    "Routing",
    "MixedRouting",
    "DriverOffer",
    "OfferProfile",
    "SimplexComponent",
    "SimplexMeasure",
    "AssignmentPlan",
    "FeasibilityResult",
    "check_mass_and_mean",
]


# ---------------------------------------------------------------------------
# Routings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Routing:
    """Fixed assignment of fleet flow to routes with the resulting times.

    Attributes
    ----------
    flows : tuple[float, ...]
        Fleet flow q_r per route (>= 0).
    times : tuple[float, ...]
        Travel time t_r per route.
    """

    flows: tuple[float, ...]
    times: tuple[float, ...]

    def __post_init__(self) -> None:
        """Validate lengths and signs."""
        if not self.flows:
            raise ValueError("routing needs at least one route")
        if len(self.flows) != len(self.times):
            raise DimensionMismatchError(
                f"{len(self.flows)} flows but {len(self.times)} travel times"
            )
        if any(q < 0 for q in self.flows):
            raise ValueError(f"flows must be >= 0, got {self.flows}")

    @classmethod
    def of(cls, flows: Sequence[float], times: Sequence[float]) -> Routing:
        """Build from any float sequences."""
        return cls(tuple(float(q) for q in flows), tuple(float(t) for t in times))

    @property
    def route_count(self) -> int:
        """Number of routes R."""
        return len(self.flows)

    @property
    def total_flow(self) -> float:
        """Fleet size q = Σ q_r."""
        return sum(self.flows)

    @property
    def total_time(self) -> float:
        """Σ q_r · t_r."""
        return sum(q * t for q, t in zip(self.flows, self.times, strict=True))

    @property
    def mean_time(self) -> float:
        """Flow-weighted mean time t̄ (0 for an empty fleet)."""
        total = self.total_flow
        return self.total_time / total if total > 0 else 0.0

    @property
    def t_min(self) -> float:
        """Shortest route time."""
        return min(self.times)

    @property
    def t_max(self) -> float:
        """Longest route time."""
        return max(self.times)

    def time_measure(self) -> DiscreteMeasure:
        """Return Q = Σ q_r δ_{t_r}."""
        return canonicalize(zip(self.times, self.flows, strict=True))

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {"flows": list(self.flows), "times": list(self.times)}


@dataclass(frozen=True)
class MixedRouting:
    """Probability mixture of routings applied day by day.

    Attributes
    ----------
    components : tuple[tuple[float, Routing], ...]
        ``(probability, routing)`` pairs; probabilities sum to 1.
    """

    components: tuple[tuple[float, Routing], ...]

    def __post_init__(self) -> None:
        """Validate probabilities and route counts."""
        if not self.components:
            raise ValueError("mixed routing needs at least one component")
        if any(p < 0 for p, _ in self.components):
            raise ValueError("component probabilities must be >= 0")
        total = sum(p for p, _ in self.components)
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"component probabilities must sum to 1, got {total}")
        counts = {routing.route_count for _, routing in self.components}
        if len(counts) != 1:
            raise DimensionMismatchError("all components must have the same number of routes")

    @classmethod
    def deterministic(cls, routing: Routing) -> MixedRouting:
        """Wrap a routing as a single-component mixture."""
        return cls(((1.0, routing),))

    @property
    def route_count(self) -> int:
        """Number of routes R."""
        return self.components[0][1].route_count

    @property
    def probabilities(self) -> tuple[float, ...]:
        """Component probabilities p^m."""
        return tuple(p for p, _ in self.components)

    def expected_times(self) -> tuple[float, ...]:
        """Expected time per route, Σ_m p^m t_r^m."""
        return tuple(
            sum(p * routing.times[r] for p, routing in self.components)
            for r in range(self.route_count)
        )

    def route_time_distributions(self) -> tuple[DiscreteMeasure, ...]:
        """Probability distribution of each route's travel time across components."""
        return tuple(
            canonicalize((routing.times[r], p) for p, routing in self.components)
            for r in range(self.route_count)
        )

    def mean_fleet_time(self) -> float:
        """Expected flow-weighted fleet travel time."""
        return sum(p * routing.mean_time for p, routing in self.components)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {
            "components": [
                {"probability": p, **routing.to_dict()} for p, routing in self.components
            ]
        }


# ---------------------------------------------------------------------------
# Offer profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DriverOffer:
    """Offered mean travel time for one driver (or driver class).

    Attributes
    ----------
    driver_id : str
        Driver identifier.
    weight : float
        Flow units represented by the driver (1 for an atomic driver).
    offer : float
        Offered mean travel time T_i.
    """

    driver_id: str
    weight: float
    offer: float

    def __post_init__(self) -> None:
        """Validate weight."""
        if self.weight < 0:
            raise ValueError(f"driver {self.driver_id}: weight must be >= 0, got {self.weight}")


@dataclass(frozen=True)
class OfferProfile:
    """Per-driver offered mean travel times.

    Attributes
    ----------
    drivers : tuple[DriverOffer, ...]
        Offers, one per driver; identifiers are unique.
    """

    drivers: tuple[DriverOffer, ...]

    def __post_init__(self) -> None:
        """Validate identifiers."""
        ids = [d.driver_id for d in self.drivers]
        if len(set(ids)) != len(ids):
            raise ValueError("driver identifiers must be unique")

    @classmethod
    def from_offers(cls, offers: Sequence[tuple[str, float, float]]) -> OfferProfile:
        """Build from ``(driver_id, weight, offer)`` triples."""
        return cls(tuple(DriverOffer(str(i), float(w), float(t)) for i, w, t in offers))

    @classmethod
    def from_distribution(cls, tau: DiscreteMeasure) -> OfferProfile:
        """Build a profile with one driver class per atom of ``tau``."""
        return cls(
            tuple(
                DriverOffer(f"atom_{k + 1}", weight, location)
                for k, (location, weight) in enumerate(tau.atoms)
            )
        )

    def __iter__(self) -> Iterator[DriverOffer]:
        return iter(self.drivers)

    def __len__(self) -> int:
        return len(self.drivers)

    @property
    def driver_ids(self) -> tuple[str, ...]:
        """Identifiers in profile order."""
        return tuple(d.driver_id for d in self.drivers)

    @property
    def total_weight(self) -> float:
        """Σ weight_i."""
        return sum(d.weight for d in self.drivers)

    @property
    def mean_offer(self) -> float:
        """Weighted mean offered time."""
        total = self.total_weight
        return sum(d.weight * d.offer for d in self.drivers) / total if total > 0 else 0.0

    def offer_of(self, driver_id: str) -> float:
        """Return the offer made to ``driver_id``."""
        for driver in self.drivers:
            if driver.driver_id == driver_id:
                return driver.offer
        raise KeyError(driver_id)

    def induced_distribution(self) -> DiscreteMeasure:
        """Return τ, the weighted distribution of offered times."""
        return canonicalize((d.offer, d.weight) for d in self.drivers)

    def check_compatible(self, routing: Routing, *, tol: float = DECISION_TOL) -> None:
        """Raise unless the profile matches the routing's fleet size and mean time.

        Raises
        ------
        IncompatibleProfileError
            If Σ weight differs from Σ q_r or the weighted mean offer from t̄.
        """
        check_mass_and_mean(self.induced_distribution(), routing, tol=tol, strict=True)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {
            "drivers": [
                {"driver_id": d.driver_id, "weight": d.weight, "offer": d.offer}
                for d in self.drivers
            ]
        }


def check_mass_and_mean(
    tau: DiscreteMeasure,
    routing: Routing,
    *,
    tol: float,
    strict: bool,
) -> None:
    """Check the invariants Σ q_r = τ(ℝ) and Σ q_r t_r = ∫ t dτ (≤ when not strict)."""
    mass, fleet = tau.total_mass(), routing.total_flow
    if abs(mass - fleet) > tol * max(1.0, fleet):
        raise IncompatibleProfileError(f"profile mass {mass} differs from fleet size {fleet}")
    offered, realised = partial_expectation(tau), routing.total_time
    slack = tol * max(1.0, abs(realised))
    if strict and abs(offered - realised) > slack:
        raise IncompatibleProfileError(
            f"profile total time {offered} differs from routing total time {realised}"
        )
    if not strict and offered < realised - slack:
        raise IncompatibleProfileError(
            f"profile total time {offered} is below routing total time {realised}"
        )


# ---------------------------------------------------------------------------
# Simplex measures and plans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimplexComponent:
    """Mass placed at one point of the unit simplex.

    Attributes
    ----------
    mass : float
        Flow units (>= 0).
    point : tuple[float, ...]
        Route proportions (non-negative, summing to 1).
    location : float | None
        Offered time covered by this component. ``None`` means the point's
        own mean time; it differs from it only for drivers served faster
        than offered.
    """

    mass: float
    point: tuple[float, ...]
    location: float | None = None

    def __post_init__(self) -> None:
        """Validate mass and simplex point."""
        if self.mass < 0:
            raise ValueError(f"component mass must be >= 0, got {self.mass}")
        if any(a < -MASS_TOL for a in self.point):
            raise ValueError(f"simplex point has negative coordinates: {self.point}")
        if abs(sum(self.point) - 1.0) > MASS_TOL:
            raise ValueError(f"simplex point does not sum to 1: {self.point}")

    def mean_time(self, times: Sequence[float]) -> float:
        """Return Σ_r α_r t_r."""
        return sum(a * t for a, t in zip(self.point, times, strict=True))

    def covered_time(self, times: Sequence[float]) -> float:
        """Offered time this component covers."""
        return self.location if self.location is not None else self.mean_time(times)


@dataclass(frozen=True)
class SimplexMeasure:
    """Distribution ν on the unit simplex induced by an assignment plan.

    Attributes
    ----------
    components : tuple[SimplexComponent, ...]
        Weighted simplex points.
    """

    components: tuple[SimplexComponent, ...] = ()

    def __iter__(self) -> Iterator[SimplexComponent]:
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def total_mass(self) -> float:
        """Σ mass."""
        return sum(c.mass for c in self.components)

    def route_flows(self) -> tuple[float, ...]:
        """Σ mass · point, the route flows generated by ν."""
        if not self.components:
            return ()
        size = len(self.components[0].point)
        return tuple(sum(c.mass * c.point[r] for c in self.components) for r in range(size))

    def generated_distribution(self, times: Sequence[float]) -> DiscreteMeasure:
        """Return the offer distribution τ generated by ν."""
        return canonicalize((c.covered_time(times), c.mass) for c in self.components)

    def to_rows(self) -> list[list[float]]:
        """Rows ``[mass, α_1, …, α_R]`` for CSV output."""
        return [[c.mass, *c.point] for c in self.components]


@dataclass(frozen=True)
class AssignmentPlan:
    """Driver × route proportion matrix subject to a routing.

    Attributes
    ----------
    driver_ids : tuple[str, ...]
        Row labels.
    weights : tuple[float, ...]
        Flow units per driver.
    proportions : tuple[tuple[float, ...], ...]
        μ(i, r), each row on the unit simplex.
    routing : Routing
        Routing the plan is subject to.
    """

    driver_ids: tuple[str, ...]
    weights: tuple[float, ...]
    proportions: tuple[tuple[float, ...], ...]
    routing: Routing

    def __post_init__(self) -> None:
        """Validate shapes."""
        if not len(self.driver_ids) == len(self.weights) == len(self.proportions):
            raise DimensionMismatchError("driver ids, weights and rows must have equal length")
        for row in self.proportions:
            if len(row) != self.routing.route_count:
                raise DimensionMismatchError(
                    f"plan row has {len(row)} entries for {self.routing.route_count} routes"
                )

    @classmethod
    def from_matrix(
        cls,
        matrix: npt.ArrayLike,
        routing: Routing,
        *,
        weights: Sequence[float] | None = None,
        driver_ids: Sequence[str] | None = None,
    ) -> AssignmentPlan:
        """Build from a 2-D array; weights default to 1 and ids to ``"1"..."n"``."""
        array = np.asarray(matrix, dtype=float)
        if array.ndim != 2:
            raise DimensionMismatchError("plan matrix must be two-dimensional")
        n = array.shape[0]
        return cls(
            driver_ids=tuple(driver_ids) if driver_ids is not None else tuple(
                str(i + 1) for i in range(n)
            ),
            weights=tuple(float(w) for w in weights) if weights is not None else (1.0,) * n,
            proportions=tuple(tuple(float(x) for x in row) for row in array),
            routing=routing,
        )

    @property
    def matrix(self) -> npt.NDArray[np.float64]:
        """μ as a ``(drivers, routes)`` array."""
        return np.array(self.proportions, dtype=float).reshape(
            len(self.proportions), self.routing.route_count
        )

    def mean_times(self) -> tuple[float, ...]:
        """Per-driver mean time Σ_r t_r μ(i, r)."""
        times = np.array(self.routing.times, dtype=float)
        return tuple(float(x) for x in self.matrix @ times)

    def residuals(self, profile: OfferProfile | None = None) -> dict[str, float]:
        """Maximum absolute violation of the plan equations.

        Returns
        -------
        dict[str, float]
            ``route_flows`` (Σ_i w_i μ(i,r) = q_r), ``proportions``
            (Σ_r μ(i,r) = 1) and, when ``profile`` is given, ``mean_times``
            (Σ_r t_r μ(i,r) = T_i).
        """
        mu = self.matrix
        w = np.array(self.weights, dtype=float)
        result = {
            "route_flows": float(np.max(np.abs(w @ mu - np.array(self.routing.flows)), initial=0)),
            "proportions": float(np.max(np.abs(mu.sum(axis=1) - 1.0), initial=0)),
        }
        if profile is not None:
            offers = np.array([profile.offer_of(i) for i in self.driver_ids], dtype=float)
            result["mean_times"] = float(
                np.max(np.abs(mu @ np.array(self.routing.times) - offers), initial=0)
            )
        return result

    def check(self, profile: OfferProfile | None = None, *, tol: float = DECISION_TOL) -> bool:
        """Return True when every residual is within ``tol``."""
        return all(value <= tol for value in self.residuals(profile).values())

    def induced_simplex_measure(self) -> SimplexMeasure:
        """Return ν, merging drivers with identical rows."""
        merged: dict[tuple[float, ...], float] = {}
        for weight, row in zip(self.weights, self.proportions, strict=True):
            merged[row] = merged.get(row, 0.0) + weight
        return SimplexMeasure(
            tuple(SimplexComponent(mass, row) for row, mass in merged.items() if mass > 0)
        )

    def to_rows(self) -> list[list[float]]:
        """Plan rows for output."""
        return [list(row) for row in self.proportions]


@dataclass(frozen=True)
class FeasibilityResult:
    """Outcome of a feasibility check.

    Unpacks as ``(feasible, measure)``. On a negative answer ``measure``
    holds the components built before the check failed; it is informational
    only.

    Attributes
    ----------
    feasible : bool
        Whether the offer distribution is realizable.
    measure : SimplexMeasure
        Generating simplex measure ν.
    """

    feasible: bool
    measure: SimplexMeasure

    def __iter__(self) -> Iterator[Any]:
        return iter((self.feasible, self.measure))

    def __bool__(self) -> bool:
        return self.feasible
