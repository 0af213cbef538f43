"""Wardrop user equilibrium and system optimum on parallel routes.

Both solvers search the common cost level c at which the per-route
inverse costs add up to the demand. A route whose cost at zero flow is
already at or above c stays unused. Costs are strictly increasing, so
every inverse and the level itself are found with
:func:`scipy.optimize.brentq`.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence

from scipy.optimize import brentq

from fleetshare.errors import DimensionMismatchError, NoConvergenceError
from fleetshare.measures.discrete import DECISION_TOL
from fleetshare.network.models import FlowVector, Network

__all__ = [
    "MAX_ITERATIONS",
    "travel_times",
    "wardrop_equilibrium",
    "system_optimum",
    "equilibrium_given_fleet",
    "total_travel_time",
    "mean_travel_time",
]

MAX_ITERATIONS = 500
_XTOL = 1e-15

CostFunction = Callable[[float], float]


def travel_times(network: Network, flows: FlowVector | Sequence[float]) -> tuple[float, ...]:
    """Return t_r = delay_r(q_r) for every route.

    Raises
    ------
    DimensionMismatchError
        If the number of flows differs from the number of routes.

    Examples
    --------
    >>> from fleetshare.network.delays import AffineDelay
    >>> net = Network((AffineDelay(1, 2), AffineDelay(2, 1)), demand=1.0)
    >>> travel_times(net, [0.5, 0.5])
    (2.0, 2.5)
    """
    vector = flows if isinstance(flows, FlowVector) else FlowVector.of(flows)
    vector.check_dimension(network)
    return tuple(delay(q) for delay, q in zip(network.routes, vector.flows, strict=True))


def total_travel_time(network: Network, flows: FlowVector | Sequence[float]) -> float:
    """Return Σ q_r · t_r(q_r)."""
    vector = flows if isinstance(flows, FlowVector) else FlowVector.of(flows)
    times = travel_times(network, vector)
    return sum(q * t for q, t in zip(vector.flows, times, strict=True))


def mean_travel_time(network: Network, flows: FlowVector | Sequence[float]) -> float:
    """Return the flow-weighted mean travel time (0 for zero flow)."""
    vector = flows if isinstance(flows, FlowVector) else FlowVector.of(flows)
    total = vector.total
    return total_travel_time(network, vector) / total if total > 0 else 0.0


def wardrop_equilibrium(network: Network) -> FlowVector:
    """Return the user-equilibrium flows (equal times on every used route).

    Raises
    ------
    NoConvergenceError
        If the level search does not converge.
    """
    return FlowVector(_equalize(list(network.routes), network.demand))


def system_optimum(network: Network) -> FlowVector:
    """Return the flows minimizing total travel time (equal marginal costs).

    Raises
    ------
    NoConvergenceError
        If the level search does not converge.
    """
    return FlowVector(_equalize([route.marginal for route in network.routes], network.demand))


def equilibrium_given_fleet(
    network: Network,
    demand: float,
    fleet_components: Sequence[tuple[float, Sequence[float]]],
) -> FlowVector:
    """Return the human-driver equilibrium given a (mixed) fleet routing.

    Human drivers cannot tell which component is applied on a given day, so
    they equalize expected times Σ_m p^m · t_r(f_r^m + x_r) where f^m are the
    fleet flows of component m.

    Parameters
    ----------
    network : Network
        Route delays (its demand is ignored).
    demand : float
        Human-driven flow to distribute.
    fleet_components : Sequence[tuple[float, Sequence[float]]]
        ``(probability, fleet flows)`` per component.

    Returns
    -------
    FlowVector
        Human-driven flows.
    """
    for _, fleet_flows in fleet_components:
        if len(fleet_flows) != network.route_count:
            raise DimensionMismatchError(
                f"{len(fleet_flows)} fleet flows given for {network.route_count} routes"
            )

    def expected_cost(r: int) -> CostFunction:
        delay = network.routes[r]
        return lambda x: sum(p * delay(flows[r] + x) for p, flows in fleet_components)

    return FlowVector(_equalize([expected_cost(r) for r in range(network.route_count)], demand))


def _equalize(costs: Sequence[CostFunction], demand: float) -> tuple[float, ...]:
    """Distribute ``demand`` so every used route has the same cost."""
    if demand <= 0.0:
        return tuple(0.0 for _ in costs)
    if len(costs) == 1:
        return (demand,)

    free = [cost(0.0) for cost in costs]
    low = min(free)
    high = max(cost(demand) for cost in costs)

    def inverse(r: int, level: float) -> float:
        if free[r] >= level:
            return 0.0
        if costs[r](demand) <= level:
            return demand
        return _root(lambda x: costs[r](x) - level, 0.0, demand)

    def excess(level: float) -> float:
        return sum(inverse(r, level) for r in range(len(costs))) - demand

    level = high if excess(high) <= 0.0 else _root(excess, low, high)
    flows = tuple(inverse(r, level) for r in range(len(costs)))

    residual = sum(flows) - demand
    if abs(residual) > DECISION_TOL:
        raise NoConvergenceError(f"flow conservation residual {residual:.3e} after level search")
    return flows


def _root(func: CostFunction, low: float, high: float) -> float:
    try:
        root, result = brentq(
            func, low, high, xtol=_XTOL, maxiter=MAX_ITERATIONS, full_output=True, disp=False
        )
    except ValueError as exc:
        raise NoConvergenceError(f"level bracket [{low}, {high}] does not bracket a root") from exc
    if not result.converged:
        raise NoConvergenceError(
            f"level search did not converge: {result.flag}", iterations=result.iterations
        )
    return float(root)
