"""Staged market entry of a fleet into an own-car Wardrop equilibrium.

Stages are logical steps, not calendar days. Stage 0 is always the
own-car-only Wardrop state; each further stage applies one fleet strategy
to the current membership, evaluates both modes for every driver, and
updates membership with the switching rule (a driver switches only when
strictly better off).
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

from fleetshare.errors import DimensionMismatchError, IncompatibleProfileError
from fleetshare.market.models import (
    DiscountProfile,
    EquilibriumVerdict,
    Mode,
    UtilityPair,
)
from fleetshare.market.utilities import market_share
from fleetshare.measures.discrete import DECISION_TOL, MASS_TOL
from fleetshare.network.equilibrium import (
    equilibrium_given_fleet,
    travel_times,
    wardrop_equilibrium,
)
from fleetshare.network.models import Network

__all__ = [
    "StageKind",
    "MimicHDV",
    "StackelbergMix",
    "TailoredOffer",
    "Stage",
    "ComponentState",
    "StageRecord",
    "StageTrace",
    "dynamic_stages",
]


class StageKind(StrEnum):
    """Fleet strategy applied in a stage."""

    WARDROP = "wardrop"
    MIMIC_HDV = "mimic_hdv"
    STACKELBERG_MIX = "stackelberg_mix"
    TAILORED_OFFER = "tailored_offer"


@dataclass(frozen=True)
class MimicHDV:
    """Route the fleet like own-car drivers at the Wardrop equilibrium."""

    kind: StageKind = field(default=StageKind.MIMIC_HDV, init=False)


@dataclass(frozen=True)
class StackelbergMix:
    """Mixed routing of the current members.

    Attributes
    ----------
    components : tuple[tuple[float, tuple[float, ...]], ...]
        ``(probability, absolute fleet flows)``; flows add up to the member weight.
    """

    components: tuple[tuple[float, tuple[float, ...]], ...]
    kind: StageKind = field(default=StageKind.STACKELBERG_MIX, init=False)

    def __post_init__(self) -> None:
        """Validate probabilities."""
        if not self.components:
            raise ValueError("stackelberg stage needs at least one component")
        total = sum(p for p, _ in self.components)
        if any(p < 0 for p, _ in self.components) or abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"component probabilities must be >= 0 and sum to 1, got {total}")


@dataclass(frozen=True)
class TailoredOffer:
    """Offer own-car drivers a mean time of at most ``bound``.

    Attributes
    ----------
    bound : float
        Guaranteed mean travel time for joiners.
    """

    bound: float
    kind: StageKind = field(default=StageKind.TAILORED_OFFER, init=False)

    def __post_init__(self) -> None:
        """Validate the bound."""
        if self.bound <= 0:
            raise ValueError(f"offer bound must be > 0, got {self.bound}")


Stage = MimicHDV | StackelbergMix | TailoredOffer


@dataclass(frozen=True)
class ComponentState:
    """Flows and times of one routing component.

    Attributes
    ----------
    probability : float
        Component probability.
    fleet_flows : tuple[float, ...]
        Fleet flow per route.
    hdv_flows : tuple[float, ...]
        Own-car flow per route (identical across components).
    times : tuple[float, ...]
        Resulting route times.
    """

    probability: float
    fleet_flows: tuple[float, ...]
    hdv_flows: tuple[float, ...]
    times: tuple[float, ...]

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {
            "probability": self.probability,
            "fleet_flows": list(self.fleet_flows),
            "hdv_flows": list(self.hdv_flows),
            "times": list(self.times),
        }


@dataclass(frozen=True)
class StageRecord:
    """Evaluated state of one stage.

    Attributes
    ----------
    index : int
        Stage number, 0 for the initial Wardrop state.
    kind : StageKind
        Strategy applied.
    share : float
        Fleet market share in the evaluated state.
    members : tuple[str, ...]
        Fleet members in the evaluated state.
    components : tuple[ComponentState, ...]
        Flows and times per component.
    utilities : tuple[UtilityPair, ...]
        Both disutilities for every driver.
    verdict : EquilibriumVerdict
        Switching incentives in the evaluated state.
    initial_offer_disutility : tuple[tuple[str, float], ...]
        For joiners of a tailored offer, γ times the time they were offered
        before their own joining changed the flows.
    """

    index: int
    kind: StageKind
    share: float
    members: tuple[str, ...]
    components: tuple[ComponentState, ...]
    utilities: tuple[UtilityPair, ...]
    verdict: EquilibriumVerdict
    initial_offer_disutility: tuple[tuple[str, float], ...] = ()

    def utility_of(self, driver_id: str) -> UtilityPair:
        """Return the pair of ``driver_id``."""
        for pair in self.utilities:
            if pair.driver_id == driver_id:
                return pair
        raise KeyError(driver_id)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {
            "index": self.index,
            "kind": self.kind.value,
            "share": self.share,
            "members": list(self.members),
            "components": [c.to_dict() for c in self.components],
            "utilities": [u.to_dict() for u in self.utilities],
            "verdict": self.verdict.to_dict(),
            "initial_offer_disutility": dict(self.initial_offer_disutility),
        }


@dataclass(frozen=True)
class StageTrace:
    """All stages of a market-entry run."""

    records: tuple[StageRecord, ...]

    def __iter__(self) -> Iterator[StageRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def __getitem__(self, index: int) -> StageRecord:
        return self.records[index]

    @property
    def shares(self) -> tuple[float, ...]:
        """Market share per stage."""
        return tuple(record.share for record in self.records)

    @property
    def final(self) -> StageRecord:
        """Last stage."""
        return self.records[-1]

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {"stages": [record.to_dict() for record in self.records]}


# ---------------------------------------------------------------------------
# Simulation
# ---------------------------------------------------------------------------


@dataclass
class _State:
    """Mutable fleet state carried between stages."""

    members: set[str]
    fleet: list[tuple[float, list[float]]]
    hdv: list[float]
    pinned: dict[str, tuple[int, ...]] = field(default_factory=dict)


def dynamic_stages(
    network: Network,
    population: DiscountProfile,
    stages: Sequence[Stage],
) -> StageTrace:
    """Run a sequence of fleet strategies starting from the own-car equilibrium.

    Parameters
    ----------
    network : Network
        Parallel routes; demand is taken from the population weight.
    population : DiscountProfile
        Drivers with their discount factors.
    stages : Sequence[Stage]
        Strategies applied in order after stage 0.

    Returns
    -------
    StageTrace
        One record per stage, stage 0 included.

    Raises
    ------
    IncompatibleProfileError
        If a Stackelberg stage's flows do not add up to the member weight.
    DimensionMismatchError
        If a stage's flow vectors do not match the number of routes.
    """
    demand = population.total_weight
    network = network.with_demand(demand)
    wardrop = wardrop_equilibrium(network)
    routes = network.route_count
    state = _State(
        members=set(),
        fleet=[(1.0, [0.0] * routes)],
        hdv=list(wardrop.flows),
    )
    records = [_evaluate(0, StageKind.WARDROP, network, population, state, hdv_only=True)]

    for index, stage in enumerate(stages, start=1):
        if isinstance(stage, MimicHDV):
            records.append(_mimic(index, network, population, state, wardrop.flows))
        elif isinstance(stage, StackelbergMix):
            records.append(_stackelberg(index, network, population, state, stage))
        else:
            records.append(_tailored(index, network, population, state, stage))
    return StageTrace(tuple(records))


def _times(network: Network, state: _State) -> list[tuple[float, ...]]:
    return [
        travel_times(network, [f + h for f, h in zip(flows, state.hdv, strict=True)])
        for _, flows in state.fleet
    ]


def _expected(times: list[tuple[float, ...]], state: _State, route_of: Sequence[int]) -> float:
    return sum(p * t[r] for (p, _), t, r in zip(state.fleet, times, route_of, strict=True))


def _pool_time(
    times: list[tuple[float, ...]], state: _State, population: DiscountProfile
) -> float:
    """Expected time of members without a personal route, averaged over the pool."""
    pool_flows = [list(flows) for _, flows in state.fleet]
    pool_weight = 0.0
    for driver in population:
        if driver.driver_id not in state.members:
            continue
        routes = state.pinned.get(driver.driver_id)
        if routes is None:
            pool_weight += driver.weight
            continue
        for m, r in enumerate(routes):
            pool_flows[m][r] -= driver.weight
    if pool_weight <= MASS_TOL:
        return min(
            sum(p * t[r] for (p, _), t in zip(state.fleet, times, strict=True))
            for r in range(len(times[0]))
        )
    total = sum(
        p * sum(max(f, 0.0) * tr for f, tr in zip(flows, t, strict=True))
        for (p, _), flows, t in zip(state.fleet, pool_flows, times, strict=True)
    )
    return total / pool_weight


def _evaluate(
    index: int,
    kind: StageKind,
    network: Network,
    population: DiscountProfile,
    state: _State,
    *,
    hdv_only: bool = False,
    initial: Sequence[tuple[str, float]] = (),
) -> StageRecord:
    times = _times(network, state)
    expected = [
        sum(p * t[r] for (p, _), t in zip(state.fleet, times, strict=True))
        for r in range(network.route_count)
    ]
    u_hdv_base = min(expected)
    pool = _pool_time(times, state, population)

    utilities: list[UtilityPair] = []
    defectors: list[str] = []
    joiners: list[str] = []
    for driver in population:
        member = driver.driver_id in state.members
        routes = state.pinned.get(driver.driver_id)
        cav_time = _expected(times, state, routes) if member and routes else pool
        pair = UtilityPair(
            driver_id=driver.driver_id,
            gamma=driver.gamma,
            weight=driver.weight,
            u_cav=driver.gamma * cav_time,
            u_hdv=u_hdv_base,
            mode=Mode.CAV if member else Mode.HDV,
        )
        utilities.append(pair)
        if member and pair.u_cav > pair.u_hdv + DECISION_TOL:
            defectors.append(driver.driver_id)
        if not member and not hdv_only and pair.u_cav < pair.u_hdv - DECISION_TOL:
            joiners.append(driver.driver_id)

    share = market_share(population, state.members)
    verdict = EquilibriumVerdict.from_switchers(
        defectors,
        joiners,
        full_share=share >= 1.0 - MASS_TOL,
        hdv_only=hdv_only,
    )
    components = tuple(
        ComponentState(p, tuple(flows), tuple(state.hdv), t)
        for (p, flows), t in zip(state.fleet, times, strict=True)
    )
    return StageRecord(
        index=index,
        kind=kind,
        share=share,
        members=tuple(d.driver_id for d in population if d.driver_id in state.members),
        components=components,
        utilities=tuple(utilities),
        verdict=verdict,
        initial_offer_disutility=tuple(initial),
    )


def _mimic(
    index: int,
    network: Network,
    population: DiscountProfile,
    state: _State,
    wardrop: Sequence[float],
) -> StageRecord:
    t_we = min(travel_times(network, wardrop))
    for driver in population:
        if driver.gamma * t_we < t_we - DECISION_TOL:
            state.members.add(driver.driver_id)
        elif driver.gamma * t_we > t_we + DECISION_TOL:
            state.members.discard(driver.driver_id)
    share = market_share(population, state.members)
    state.fleet = [(1.0, [share * q for q in wardrop])]
    state.hdv = [(1.0 - share) * q for q in wardrop]
    state.pinned = {}
    return _evaluate(index, StageKind.MIMIC_HDV, network, population, state)


def _stackelberg(
    index: int,
    network: Network,
    population: DiscountProfile,
    state: _State,
    stage: StackelbergMix,
) -> StageRecord:
    member_weight = sum(d.weight for d in population if d.driver_id in state.members)
    for _, flows in stage.components:
        if len(flows) != network.route_count:
            raise DimensionMismatchError(
                f"{len(flows)} fleet flows given for {network.route_count} routes"
            )
        if abs(sum(flows) - member_weight) > DECISION_TOL * max(1.0, member_weight):
            raise IncompatibleProfileError(
                f"fleet flows add up to {sum(flows)} but members weigh {member_weight}"
            )
    state.fleet = [(p, list(flows)) for p, flows in stage.components]
    state.pinned = {}
    hdv_demand = population.total_weight - member_weight
    state.hdv = list(equilibrium_given_fleet(network, hdv_demand, stage.components).flows)
    record = _evaluate(index, StageKind.STACKELBERG_MIX, network, population, state)

    state.members.difference_update(record.verdict.defectors)
    state.members.update(record.verdict.joiners)
    return record


def _tailored(
    index: int,
    network: Network,
    population: DiscountProfile,
    state: _State,
    stage: TailoredOffer,
) -> StageRecord:
    times = _times(network, state)
    expected = [
        sum(p * t[r] for (p, _), t in zip(state.fleet, times, strict=True))
        for r in range(network.route_count)
    ]
    u_hdv = min(expected)
    fastest = tuple(min(range(len(t)), key=lambda r, t=t: (t[r], r)) for t in times)
    offered = _expected(times, state, fastest)

    joiners = [
        d
        for d in population
        if d.driver_id not in state.members and d.gamma * stage.bound < u_hdv - DECISION_TOL
    ]
    initial = [(d.driver_id, d.gamma * offered) for d in joiners]
    for driver in joiners:
        state.members.add(driver.driver_id)
        state.pinned[driver.driver_id] = fastest
        for m, route in enumerate(fastest):
            state.fleet[m][1][route] += driver.weight

    member_weight = sum(d.weight for d in population if d.driver_id in state.members)
    hdv_demand = population.total_weight - member_weight
    state.hdv = list(
        equilibrium_given_fleet(
            network, hdv_demand, [(p, tuple(flows)) for p, flows in state.fleet]
        ).flows
    )
    return _evaluate(
        index, StageKind.TAILORED_OFFER, network, population, state, initial=initial
    )
