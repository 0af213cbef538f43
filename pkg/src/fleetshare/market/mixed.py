"""Equilibrium analysis of mixed fleet routings."""

from __future__ import annotations

from collections.abc import Mapping, Sequence

from fleetshare.errors import RuleIncompleteError
from fleetshare.feasibility.models import MixedRouting
from fleetshare.market.models import (
    DiscountProfile,
    DriverAttitude,
    EquilibriumVerdict,
    MixedAnalysis,
)
from fleetshare.market.utilities import general_utility_pair, hdv_disutility
from fleetshare.measures.discrete import DECISION_TOL
from fleetshare.risk.models import PenaltySpec

__all__ = ["mixed_market_analysis", "check_rule"]

# Driver with default parameters, used for the population-wide route choice.
_BASE_DRIVER = DriverAttitude("hdv", 1.0, 1.0)


def check_rule(
    mix: MixedRouting,
    rule: Mapping[str, Sequence[int]],
    gamma: DiscountProfile,
) -> None:
    """Check that ``rule`` routes every driver and reproduces the component flows.

    Raises
    ------
    RuleIncompleteError
        If a driver has no route for some component, a route index is out of
        range, or a component's loads differ from its flows by more than 1e-9.
    """
    components = len(mix.components)
    for driver in gamma:
        routes = rule.get(driver.driver_id)
        if routes is None or len(routes) != components:
            raise RuleIncompleteError(
                f"driver {driver.driver_id} needs one route for each of {components} components"
            )
        if any(r < 0 or r >= mix.route_count for r in routes):
            raise RuleIncompleteError(f"driver {driver.driver_id}: route index out of range")

    for m, (_, routing) in enumerate(mix.components):
        loads = [0.0] * mix.route_count
        for driver in gamma:
            loads[rule[driver.driver_id][m]] += driver.weight
        for r, (load, flow) in enumerate(zip(loads, routing.flows, strict=True)):
            if abs(load - flow) > DECISION_TOL * max(1.0, flow):
                raise RuleIncompleteError(
                    f"component {m + 1}, route {r + 1}: rule loads {load} but flow is {flow}"
                )


def mixed_market_analysis(
    mix: MixedRouting,
    rule: Mapping[str, Sequence[int]],
    gamma: DiscountProfile,
    penalty: PenaltySpec | None = None,
) -> MixedAnalysis:
    """Evaluate both modes for every driver under a mixed fleet routing.

    Own-car drivers cannot tell which component runs on a given day, so they
    face the distribution of each route's time across components and take
    the route with the smallest expected disutility. A fleet member's time
    is the expectation over components of the routes the rule gives it.

    Parameters
    ----------
    mix : MixedRouting
        Components with probabilities; the whole population rides the fleet.
    rule : Mapping[str, Sequence[int]]
        0-based route per component for every driver id.
    gamma : DiscountProfile
        Population.
    penalty : PenaltySpec | None, optional
        Adds the schedule-delay risk of each route to the own-car disutility.

    Returns
    -------
    MixedAnalysis
        Utilities, verdict and the own-car route choice.

    Raises
    ------
    RuleIncompleteError
        See :func:`check_rule`.
    """
    check_rule(mix, rule, gamma)
    distributions = mix.route_time_distributions()

    utilities = []
    for driver in gamma:
        routes = rule[driver.driver_id]
        cav_time = sum(
            p * routing.times[r] for (p, routing), r in zip(mix.components, routes, strict=True)
        )
        utilities.append(general_utility_pair(driver, cav_time, distributions, penalty))

    defectors = [u.driver_id for u in utilities if u.u_cav > u.u_hdv + DECISION_TOL]
    hdv_route, _ = hdv_disutility(_BASE_DRIVER, distributions, penalty)
    return MixedAnalysis(
        utilities=tuple(utilities),
        verdict=EquilibriumVerdict.from_switchers(defectors, (), full_share=True),
        hdv_route=hdv_route,
    )
