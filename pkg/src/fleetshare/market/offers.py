"""Full-market-share conditions and offer construction for fixed routings.

A fleet member accepts an offered mean time T_i when γ_i T_i ≤ t_min, the
time of the fastest route an own-car driver would take. Summing the
largest acceptable offers gives the necessary condition t̄ ≤ t_min E(1/γ).
"""

from __future__ import annotations

from fleetshare.errors import DimensionMismatchError, InfeasibleOfferError
from fleetshare.feasibility.greedy import feasible, feasible_not_exceeding
from fleetshare.feasibility.models import AssignmentPlan, OfferProfile, Routing
from fleetshare.feasibility.plans import plan_from_simplex_measure, symmetric_profile
from fleetshare.market.models import (
    DiscountProfile,
    MarketOffer,
    OfferVerdict,
    PreprocessResult,
)
from fleetshare.measures.discrete import DECISION_TOL, MASS_TOL

__all__ = [
    "necessary_condition",
    "tailored_offer_two_routes",
    "preprocess_small_gamma",
    "full_market_offer",
]


def necessary_condition(routing: Routing, gamma: DiscountProfile) -> bool:
    """Return True when t̄ ≤ t_min · E(1/γ) within 1e-9.

    Examples
    --------
    >>> so = Routing.of([0.5, 0.5], [2.0, 2.5])
    >>> population = DiscountProfile.from_gammas([("a", 0.5, 1.0), ("b", 0.5, 0.8)])
    >>> necessary_condition(so, population)
    True
    """
    return routing.mean_time <= routing.t_min * gamma.mean_inverse_gamma() + DECISION_TOL


def tailored_offer_two_routes(routing: Routing, gamma: DiscountProfile) -> OfferProfile:
    """Build offers on two routes that nobody wants to decline.

    Parameters
    ----------
    routing : Routing
        Two-route routing.
    gamma : DiscountProfile
        Population with t_min / t_max ≤ γ_i ≤ 1; weights add up to the fleet size.

    Returns
    -------
    OfferProfile
        The symmetric profile T_i = t̄ when every γ_i t̄ ≤ t_min, the profile
        T_i = t_min / γ_i when the necessary condition holds with equality,
        and otherwise T_i = t_min + (t_min / γ_i − t_min) / α with
        α = t_min (E(1/γ) − 1) / (t̄ − t_min).

    Raises
    ------
    DimensionMismatchError
        If the routing does not have two routes.
    ValueError
        If some γ_i lies outside [t_min / t_max, 1]; pin those drivers with
        :func:`preprocess_small_gamma` first.
    InfeasibleOfferError
        If t̄ > t_min · E(1/γ).
    """
    if routing.route_count != 2:
        raise DimensionMismatchError(f"two routes required, got {routing.route_count}")
    t_min, t_max, mean = routing.t_min, routing.t_max, routing.mean_time
    lower = t_min / t_max
    for driver in gamma:
        if driver.gamma < lower - DECISION_TOL or driver.gamma > 1 + DECISION_TOL:
            raise ValueError(
                f"driver {driver.driver_id}: gamma {driver.gamma} outside [{lower}, 1]"
            )
    drivers = [(d.driver_id, d.weight) for d in gamma]

    if max((d.gamma for d in gamma), default=0.0) * mean <= t_min + DECISION_TOL:
        return symmetric_profile(routing, drivers)
    if not necessary_condition(routing, gamma):
        raise InfeasibleOfferError(
            f"mean time {mean} exceeds t_min * E(1/gamma) = "
            f"{t_min * gamma.mean_inverse_gamma()}"
        )

    slack = t_min * gamma.mean_inverse_gamma() - mean
    if abs(slack) <= DECISION_TOL or mean - t_min <= MASS_TOL:
        offers = [(d.driver_id, d.weight, t_min / d.gamma) for d in gamma]
    else:
        alpha = t_min * (gamma.mean_inverse_gamma() - 1.0) / (mean - t_min)
        offers = [
            (d.driver_id, d.weight, t_min + (t_min / d.gamma - t_min) / alpha) for d in gamma
        ]
    return OfferProfile.from_offers(offers)


def preprocess_small_gamma(routing: Routing, gamma: DiscountProfile) -> PreprocessResult:
    """Pin drivers with γ < t_min / t_max before building two-route offers.

    Such drivers accept even the slow route, so they go to it first. When
    their weight reaches the slow route's flow, the others are pinned to the
    fast route instead and the pinned drivers share the remaining slots.

    Parameters
    ----------
    routing : Routing
        Two-route routing.
    gamma : DiscountProfile
        Population with γ_i ≤ 1.

    Returns
    -------
    PreprocessResult
        Reduced routing and population plus the pinned plan rows.
    """
    if routing.route_count != 2:
        raise DimensionMismatchError(f"two routes required, got {routing.route_count}")
    slow = 0 if routing.times[0] > routing.times[1] else 1
    fast = 1 - slow
    threshold = routing.t_min / routing.t_max
    small = [d for d in gamma if d.gamma < threshold]
    rest = [d for d in gamma if d.gamma >= threshold]
    small_weight = sum(d.weight for d in small)
    slow_flow = routing.flows[slow]

    def row(on_slow: float) -> tuple[float, ...]:
        result = [0.0, 0.0]
        result[slow], result[fast] = on_slow, 1.0 - on_slow
        return tuple(result)

    if not small:
        return PreprocessResult(routing, gamma, ())

    if small_weight < slow_flow:
        flows = list(routing.flows)
        flows[slow] -= small_weight
        return PreprocessResult(
            Routing.of(flows, routing.times),
            DiscountProfile(tuple(rest)),
            tuple((d.driver_id, row(1.0)) for d in small),
        )

    share = slow_flow / small_weight
    pinned = [(d.driver_id, row(share)) for d in small]
    pinned += [(d.driver_id, row(0.0)) for d in rest]
    return PreprocessResult(None, DiscountProfile(()), tuple(pinned))


def full_market_offer(routing: Routing, gamma: DiscountProfile) -> MarketOffer:
    """Decide whether offers exist that keep every driver in the fleet.

    Offers the largest acceptable time T_i = min(t_min / γ_i, t_max) and
    compares its total with the routing's. A smaller total is a NO; an
    equal total is settled by :func:`feasible`; a larger one by
    :func:`feasible_not_exceeding`, which may serve drivers faster than
    offered.

    Parameters
    ----------
    routing : Routing
        Fleet routing (any number of routes).
    gamma : DiscountProfile
        Population whose weights add up to the fleet size.

    Returns
    -------
    MarketOffer
        Verdict, offers and, on YES, the measure, plan and effective times.

    Raises
    ------
    IncompatibleProfileError
        If the population weight differs from the fleet size.

    Examples
    --------
    >>> so = Routing.of([0.5, 0.5], [2.0, 2.5])
    >>> population = DiscountProfile.from_gammas([("a", 0.5, 1.0), ("b", 0.5, 0.8)])
    >>> full_market_offer(so, population).verdict.value
    'yes'
    """
    t_min, t_max = routing.t_min, routing.t_max
    profile = OfferProfile.from_offers(
        [(d.driver_id, d.weight, min(t_min / d.gamma, t_max)) for d in gamma]
    )
    tau = profile.induced_distribution()
    offered = sum(d.weight * d.offer for d in profile)
    realised = routing.total_time
    slack = DECISION_TOL * max(1.0, abs(realised))

    if offered < realised - slack:
        return MarketOffer(OfferVerdict.NO, profile, "mean_below")

    if offered <= realised + slack:
        method = "feasible"
        result = feasible(routing, tau)
    else:
        method = "feasible_not_exceeding"
        result = feasible_not_exceeding(routing, tau)

    if not result.feasible:
        return MarketOffer(OfferVerdict.NO, profile, method, measure=result.measure)

    plan: AssignmentPlan = plan_from_simplex_measure(result.measure, profile, routing)
    effective = OfferProfile.from_offers(
        [
            (driver_id, weight, time)
            for driver_id, weight, time in zip(
                plan.driver_ids, plan.weights, plan.mean_times(), strict=True
            )
        ]
    )
    return MarketOffer(
        OfferVerdict.YES,
        profile,
        method,
        measure=result.measure,
        plan=plan,
        effective=effective,
    )
