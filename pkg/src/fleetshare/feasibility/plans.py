"""Assignment plans built from simplex measures or closed-form rules."""

from __future__ import annotations

from collections.abc import Sequence

from fleetshare.errors import (
    DimensionMismatchError,
    EqualTimesError,
    GenerationMismatchError,
    IncompatibleProfileError,
)
from fleetshare.feasibility.models import (
    AssignmentPlan,
    OfferProfile,
    Routing,
    SimplexMeasure,
    check_mass_and_mean,
)
from fleetshare.measures.discrete import DECISION_TOL, MASS_TOL

__all__ = [
    "plan_from_simplex_measure",
    "two_route_plan",
    "symmetric_profile",
    "symmetric_plan",
    "symmetric_acceptance_bound",
]


def plan_from_simplex_measure(
    measure: SimplexMeasure,
    profile: OfferProfile,
    routing: Routing,
) -> AssignmentPlan:
    """Build μ from a simplex measure that generates the profile's offers.

    Each driver's row is the mass-weighted mixture of the components that
    cover the driver's offered time, so drivers sharing an offer are split
    the same way.

    Parameters
    ----------
    measure : SimplexMeasure
        Generating measure ν, e.g. from :func:`feasible`.
    profile : OfferProfile
        Offered times per driver.
    routing : Routing
        Routing ν refers to.

    Returns
    -------
    AssignmentPlan
        Plan whose flows equal the routing's flows.

    Raises
    ------
    GenerationMismatchError
        If ν does not generate the profile's offer distribution.
    """
    times = routing.times
    tau = profile.induced_distribution()
    mixtures: list[tuple[float, list[float]]] = [
        (0.0, [0.0] * routing.route_count) for _ in tau.atoms
    ]

    for component in measure:
        if component.mass <= 0:
            continue
        if len(component.point) != routing.route_count:
            raise DimensionMismatchError(
                f"simplex point has {len(component.point)} coordinates for "
                f"{routing.route_count} routes"
            )
        covered = component.covered_time(times)
        index = _matching_atom(tau.locations, covered)
        if index is None:
            raise GenerationMismatchError(f"component covering time {covered} matches no offer")
        mass, row = mixtures[index]
        mixtures[index] = (
            mass + component.mass,
            [acc + component.mass * a for acc, a in zip(row, component.point, strict=True)],
        )

    rows_by_offer: dict[float, tuple[float, ...]] = {}
    for (location, weight), (mass, row) in zip(tau.atoms, mixtures, strict=True):
        if abs(mass - weight) > DECISION_TOL * max(1.0, weight):
            raise GenerationMismatchError(
                f"offer {location} has weight {weight} but the measure covers {mass}"
            )
        rows_by_offer[location] = tuple(x / mass for x in row)

    return AssignmentPlan(
        driver_ids=profile.driver_ids,
        weights=tuple(d.weight for d in profile),
        proportions=tuple(
            rows_by_offer.get(float(d.offer), _fallback_row(routing)) for d in profile
        ),
        routing=routing,
    )


def _matching_atom(locations: Sequence[float], value: float) -> int | None:
    best: int | None = None
    best_gap = DECISION_TOL
    for index, location in enumerate(locations):
        gap = abs(location - value)
        if gap <= best_gap:
            best, best_gap = index, gap
    return best


def _fallback_row(routing: Routing) -> tuple[float, ...]:
    """Proportional row, used only for zero-weight drivers absent from τ."""
    total = routing.total_flow
    if total <= 0:
        return tuple(1.0 / routing.route_count for _ in routing.flows)
    return tuple(q / total for q in routing.flows)


def two_route_plan(profile: OfferProfile, routing: Routing) -> AssignmentPlan:
    """Return the unique plan for a two-route routing.

    μ(i, 1) = (t_2 − T_i) / (t_2 − t_1) and μ(i, 2) = 1 − μ(i, 1).

    Raises
    ------
    DimensionMismatchError
        If the routing does not have exactly two routes.
    IncompatibleProfileError
        If the profile violates compatibility or an offer lies outside [t_min, t_max].
    EqualTimesError
        If t_1 = t_2; the error's ``fallback`` holds the proportional plan.

    Examples
    --------
    >>> routing = Routing.of([0.5, 0.5], [2.0, 2.5])
    >>> plan = two_route_plan(OfferProfile.from_offers([("a", 1.0, 2.25)]), routing)
    >>> plan.proportions
    ((0.5, 0.5),)
    """
    if routing.route_count != 2:
        raise DimensionMismatchError(f"two routes required, got {routing.route_count}")
    check_mass_and_mean(profile.induced_distribution(), routing, tol=DECISION_TOL, strict=True)

    t1, t2 = routing.times
    if abs(t2 - t1) <= MASS_TOL:
        raise EqualTimesError(
            "equal route times: any split with the right flows is valid",
            fallback=symmetric_plan(routing, [(d.driver_id, d.weight) for d in profile]),
        )

    rows: list[tuple[float, float]] = []
    for driver in profile:
        share = (t2 - driver.offer) / (t2 - t1)
        if share < -DECISION_TOL or share > 1 + DECISION_TOL:
            raise IncompatibleProfileError(
                f"offer {driver.offer} for driver {driver.driver_id} outside [{min(t1, t2)}, "
                f"{max(t1, t2)}]"
            )
        share = min(1.0, max(0.0, share))
        rows.append((share, 1.0 - share))

    return AssignmentPlan(
        driver_ids=profile.driver_ids,
        weights=tuple(d.weight for d in profile),
        proportions=tuple(rows),
        routing=routing,
    )


def symmetric_profile(routing: Routing, drivers: Sequence[tuple[str, float]]) -> OfferProfile:
    """Offer every driver the fleet mean time t̄ (always feasible).

    Parameters
    ----------
    routing : Routing
        Fleet routing.
    drivers : Sequence[tuple[str, float]]
        ``(driver_id, weight)`` pairs; weights should add up to the fleet size.
    """
    mean = routing.mean_time
    return OfferProfile.from_offers([(driver_id, weight, mean) for driver_id, weight in drivers])


def symmetric_plan(routing: Routing, drivers: Sequence[tuple[str, float]]) -> AssignmentPlan:
    """Route every driver proportionally, μ(i, r) = q_r / q."""
    row = _fallback_row(routing)
    return AssignmentPlan(
        driver_ids=tuple(driver_id for driver_id, _ in drivers),
        weights=tuple(float(weight) for _, weight in drivers),
        proportions=tuple(row for _ in drivers),
        routing=routing,
    )


def symmetric_acceptance_bound(routing: Routing) -> float:
    """Largest discount factor at which every driver accepts the symmetric offer.

    A driver with discount γ prefers γ · t̄ to the human-driven time t_min
    exactly when γ ≤ t_min / t̄.

    Examples
    --------
    >>> symmetric_acceptance_bound(Routing.of([0.5, 0.5], [2.0, 2.5]))
    0.8888888888888888
    """
    mean = routing.mean_time
    if mean <= 0:
        return 1.0
    return routing.t_min / mean
