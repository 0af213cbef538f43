"""Data models for driver attitudes, utilities and market verdicts."""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

from fleetshare.feasibility.models import AssignmentPlan, OfferProfile, Routing, SimplexMeasure

__all__ = [
    "DriverAttitude",
    "DiscountProfile",
    "Mode",
    "UtilityPair",
    "VerdictKind",
    "NestedVerdict",
    "EquilibriumVerdict",
    "OfferVerdict",
    "MarketOffer",
    "PreprocessResult",
    "MixedAnalysis",
]


# ---------------------------------------------------------------------------
# Population
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DriverAttitude:
    """Attitude of one driver (or driver class) towards the fleet.

    Attributes
    ----------
    driver_id : str
        Driver or class identifier.
    weight : float
        Flow units represented.
    gamma : float
        Fleet discount factor γ > 0; below 1 means the driver values time
        in a fleet vehicle less than time at the wheel.
    beta : float
        Value of time, by default 1.
    u_cav0 : float
        Constant term of the fleet disutility, by default 0.
    u_hdv0 : float
        Constant term of the own-car disutility, by default 0.
    epsilon : tuple[float, ...]
        Per-route preference terms for own-car trips; empty means 0.
    """

    driver_id: str
    weight: float
    gamma: float
    beta: float = 1.0
    u_cav0: float = 0.0
    u_hdv0: float = 0.0
    epsilon: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        """Validate parameters."""
        if self.weight < 0:
            raise ValueError(f"driver {self.driver_id}: weight must be >= 0, got {self.weight}")
        if self.gamma <= 0:
            raise ValueError(f"driver {self.driver_id}: gamma must be > 0, got {self.gamma}")
        if self.beta <= 0:
            raise ValueError(f"driver {self.driver_id}: beta must be > 0, got {self.beta}")

    def preference(self, route: int) -> float:
        """Preference term ε for ``route`` (0 when not given)."""
        return self.epsilon[route] if route < len(self.epsilon) else 0.0

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {
            "driver_id": self.driver_id,
            "weight": self.weight,
            "gamma": self.gamma,
            "beta": self.beta,
            "u_cav0": self.u_cav0,
            "u_hdv0": self.u_hdv0,
            "epsilon": list(self.epsilon),
        }


@dataclass(frozen=True)
class DiscountProfile:
    """Discount factors of a driver population.

    Attributes
    ----------
    drivers : tuple[DriverAttitude, ...]
        One entry per driver or class; identifiers are unique.
    """

    drivers: tuple[DriverAttitude, ...]

    def __post_init__(self) -> None:
        """Validate identifiers."""
        ids = [d.driver_id for d in self.drivers]
        if len(set(ids)) != len(ids):
            raise ValueError("driver identifiers must be unique")

    @classmethod
    def from_gammas(cls, entries: Sequence[tuple[str, float, float]]) -> DiscountProfile:
        """Build from ``(driver_id, weight, gamma)`` triples."""
        return cls(tuple(DriverAttitude(str(i), float(w), float(g)) for i, w, g in entries))

    def __iter__(self) -> Iterator[DriverAttitude]:
        return iter(self.drivers)

    def __len__(self) -> int:
        return len(self.drivers)

    @property
    def driver_ids(self) -> tuple[str, ...]:
        """Identifiers in profile order."""
        return tuple(d.driver_id for d in self.drivers)

    @property
    def total_weight(self) -> float:
        """Σ weight."""
        return sum(d.weight for d in self.drivers)

    def get(self, driver_id: str) -> DriverAttitude:
        """Return the attitude of ``driver_id``."""
        for driver in self.drivers:
            if driver.driver_id == driver_id:
                return driver
        raise KeyError(driver_id)

    def mean_inverse_gamma(self) -> float:
        """Weighted mean of 1/γ."""
        total = self.total_weight
        if total <= 0:
            return 0.0
        return sum(d.weight / d.gamma for d in self.drivers) / total

    def subset(self, driver_ids: Sequence[str]) -> DiscountProfile:
        """Profile restricted to ``driver_ids`` (profile order kept)."""
        keep = set(driver_ids)
        return DiscountProfile(tuple(d for d in self.drivers if d.driver_id in keep))

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {"drivers": [d.to_dict() for d in self.drivers]}


# ---------------------------------------------------------------------------
# Utilities and verdicts
# ---------------------------------------------------------------------------


class Mode(StrEnum):
    """Travel mode of a driver."""

    CAV = "cav"
    HDV = "hdv"


@dataclass(frozen=True)
class UtilityPair:
    """Disutilities of both modes for one driver.

    Attributes
    ----------
    driver_id : str
        Driver identifier.
    gamma : float
        Discount factor.
    weight : float
        Flow units.
    u_cav : float
        Disutility of travelling with the fleet.
    u_hdv : float
        Disutility of driving oneself.
    mode : Mode
        Mode the driver uses in the evaluated state.
    """

    driver_id: str
    gamma: float
    weight: float
    u_cav: float
    u_hdv: float
    mode: Mode = Mode.CAV

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {
            "driver_id": self.driver_id,
            "gamma": self.gamma,
            "weight": self.weight,
            "mode": self.mode.value,
            "u_cav": self.u_cav,
            "u_hdv": self.u_hdv,
        }


class VerdictKind(StrEnum):
    """Whether a state is a dynamic full-information equilibrium.

    Attributes
    ----------
    DFHE : str
        No fleet member wants to leave and no own-car driver wants to join.
    NOT_EQUILIBRIUM : str
        Some driver has an incentive to switch.
    """

    DFHE = "DFHE"
    NOT_EQUILIBRIUM = "NOT_EQUILIBRIUM"


class NestedVerdict(StrEnum):
    """Whether the stronger nested equilibrium notion could be certified."""

    NFHE = "NFHE"
    NOT_VERIFIED = "NOT_VERIFIED"


@dataclass(frozen=True)
class EquilibriumVerdict:
    """Switching incentives in a fleet/own-car state.

    Attributes
    ----------
    kind : VerdictKind
        DFHE exactly when ``defectors`` and ``joiners`` are empty.
    defectors : tuple[str, ...]
        Members with u_cav > u_hdv.
    joiners : tuple[str, ...]
        Own-car drivers with u_cav < u_hdv.
    nested : NestedVerdict
        NFHE only for own-car Wardrop states and for full market share
        without defectors.
    """

    kind: VerdictKind
    defectors: tuple[str, ...] = ()
    joiners: tuple[str, ...] = ()
    nested: NestedVerdict = NestedVerdict.NOT_VERIFIED

    @classmethod
    def from_switchers(
        cls,
        defectors: Sequence[str],
        joiners: Sequence[str],
        *,
        full_share: bool,
        hdv_only: bool = False,
    ) -> EquilibriumVerdict:
        """Classify a state from its would-be switchers."""
        stable = not defectors and not joiners
        certified = stable and (full_share or hdv_only)
        return cls(
            kind=VerdictKind.DFHE if stable else VerdictKind.NOT_EQUILIBRIUM,
            defectors=tuple(defectors),
            joiners=tuple(joiners),
            nested=NestedVerdict.NFHE if certified else NestedVerdict.NOT_VERIFIED,
        )

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {
            "kind": self.kind.value,
            "nested": self.nested.value,
            "defectors": list(self.defectors),
            "joiners": list(self.joiners),
        }


class OfferVerdict(StrEnum):
    """Answer of the full-market-share offer search."""

    YES = "yes"
    NO = "no"


@dataclass(frozen=True)
class MarketOffer:
    """Outcome of :func:`full_market_offer`.

    Attributes
    ----------
    verdict : OfferVerdict
        YES when an offer without defection exists.
    profile : OfferProfile
        Maximal acceptable offers T_i = min(t_min / γ_i, t_max).
    method : str
        ``"mean_below"`` (rejected by the necessary condition),
        ``"feasible"`` or ``"feasible_not_exceeding"``.
    measure : SimplexMeasure | None
        Generating measure on YES.
    plan : AssignmentPlan | None
        Assignment plan on YES.
    effective : OfferProfile | None
        Mean times the plan actually delivers (≤ the offers).
    """

    verdict: OfferVerdict
    profile: OfferProfile
    method: str
    measure: SimplexMeasure | None = None
    plan: AssignmentPlan | None = None
    effective: OfferProfile | None = None

    def __bool__(self) -> bool:
        return self.verdict is OfferVerdict.YES

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {
            "verdict": self.verdict.value,
            "method": self.method,
            "profile": self.profile.to_dict(),
            "effective": self.effective.to_dict() if self.effective is not None else None,
        }


@dataclass(frozen=True)
class PreprocessResult:
    """Reduced two-route problem after pinning drivers with small γ.

    Attributes
    ----------
    routing : Routing | None
        Remaining routing, or None when every driver is pinned.
    gamma : DiscountProfile
        Drivers still to be offered.
    pinned : tuple[tuple[str, tuple[float, ...]], ...]
        ``(driver_id, plan row)`` of every pinned driver.
    """

    routing: Routing | None
    gamma: DiscountProfile
    pinned: tuple[tuple[str, tuple[float, ...]], ...] = field(default_factory=tuple)

    @property
    def pinned_ids(self) -> tuple[str, ...]:
        """Identifiers of pinned drivers."""
        return tuple(driver_id for driver_id, _ in self.pinned)


@dataclass(frozen=True)
class MixedAnalysis:
    """Utilities and verdict for a mixed fleet routing.

    Attributes
    ----------
    utilities : tuple[UtilityPair, ...]
        One pair per driver.
    verdict : EquilibriumVerdict
        Switching incentives.
    hdv_route : int
        0-based route an own-car driver would pick.
    """

    utilities: tuple[UtilityPair, ...]
    verdict: EquilibriumVerdict
    hdv_route: int

    def utility_of(self, driver_id: str) -> UtilityPair:
        """Return the pair of ``driver_id``."""
        for pair in self.utilities:
            if pair.driver_id == driver_id:
                return pair
        raise KeyError(driver_id)
