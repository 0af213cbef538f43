"""Fleet and own-car disutilities."""

from __future__ import annotations

from collections.abc import Iterable, Sequence

from fleetshare.market.models import DiscountProfile, DriverAttitude, Mode, UtilityPair
from fleetshare.measures.discrete import DiscreteMeasure
from fleetshare.risk.departure import optimal_rho
from fleetshare.risk.models import PenaltySpec

__all__ = ["general_utility_pair", "hdv_disutility", "market_share"]


def hdv_disutility(
    driver: DriverAttitude,
    route_distributions: Sequence[DiscreteMeasure],
    penalty: PenaltySpec | None = None,
) -> tuple[int, float]:
    """Best own-car route and its disutility u^{HDV,0} + β E[T_r] + ε_r (+ risk).

    Ties go to the lowest route index.
    """
    best_route, best_value = 0, float("inf")
    for route, distribution in enumerate(route_distributions):
        value = driver.beta * distribution.mean() + driver.preference(route)
        if penalty is not None:
            value += optimal_rho(distribution, penalty).risk
        if value < best_value - 1e-12:
            best_route, best_value = route, value
    return best_route, driver.u_hdv0 + best_value


def general_utility_pair(
    driver: DriverAttitude,
    cav_time: float,
    route_distributions: Sequence[DiscreteMeasure],
    penalty: PenaltySpec | None = None,
    *,
    mode: Mode = Mode.CAV,
) -> UtilityPair:
    """Evaluate both disutilities of a driver.

    u^CAV = u^{CAV,0} + γ β T and u^HDV = u^{HDV,0} + min_r {β E[T_r] + ε_r + risk_r}.
    Fleet trips carry no schedule risk since pickups are timed door to door.

    Parameters
    ----------
    driver : DriverAttitude
        Driver parameters; the defaults give u^CAV = γ T and u^HDV = min_r E[T_r].
    cav_time : float
        Mean travel time T offered by the fleet.
    route_distributions : Sequence[DiscreteMeasure]
        Travel-time distribution of every route as seen by an own-car driver.
    penalty : PenaltySpec | None, optional
        Schedule-delay penalty; None leaves the risk term out.
    mode : Mode, optional
        Mode recorded in the result.

    Returns
    -------
    UtilityPair
        Both disutilities.
    """
    _, u_hdv = hdv_disutility(driver, route_distributions, penalty)
    return UtilityPair(
        driver_id=driver.driver_id,
        gamma=driver.gamma,
        weight=driver.weight,
        u_cav=driver.u_cav0 + driver.gamma * driver.beta * cav_time,
        u_hdv=u_hdv,
        mode=mode,
    )


def market_share(profile: DiscountProfile, members: Iterable[str]) -> float:
    """Weight of ``members`` over the population's total weight.

    Examples
    --------
    >>> population = DiscountProfile.from_gammas([("a", 0.9, 0.7), ("b", 0.1, 1.3)])
    >>> market_share(population, ["a"])
    0.9
    """
    total = profile.total_weight
    if total <= 0:
        return 0.0
    keep = set(members)
    return sum(d.weight for d in profile if d.driver_id in keep) / total
