"""Initial-section criterion for offer feasibility.

An offer distribution τ is feasible for a routing with route-time measure
Q = Σ q_r δ_{t_r} exactly when E(Q^m) ≤ E(τ^m) for every mass m, where λ^m
is the initial section of mass m. Both sides are piecewise linear in m with
breakpoints at cumulative atom masses, so checking the merged breakpoints
suffices.
"""

from __future__ import annotations

from itertools import accumulate

from fleetshare.feasibility.models import Routing, check_mass_and_mean
from fleetshare.measures.discrete import (
    DECISION_TOL,
    DiscreteMeasure,
    initial_section,
    partial_expectation,
)

__all__ = ["feasible_by_criterion", "criterion_breakpoints"]


def criterion_breakpoints(q_measure: DiscreteMeasure, tau: DiscreteMeasure) -> list[float]:
    """Merged cumulative masses of both measures, ascending, starting at 0."""
    limit = min(q_measure.total_mass(), tau.total_mass())
    masses = {0.0, limit}
    masses.update(accumulate(q_measure.weights))
    masses.update(accumulate(tau.weights))
    return sorted(m for m in masses if m <= limit)


def feasible_by_criterion(routing: Routing, tau: DiscreteMeasure) -> bool:
    """Decide feasibility through E(Q^m) ≤ E(τ^m) + 1e-9 at every breakpoint.

    Raises
    ------
    IncompatibleProfileError
        If ``tau`` differs from the fleet size or mean time beyond 1e-9.

    Examples
    --------
    >>> from fleetshare.measures import canonicalize
    >>> routing = Routing.of([0.25, 0.5, 0.25], [10, 20, 30])
    >>> feasible_by_criterion(routing, canonicalize([(10, 0.5), (30, 0.5)]))
    False
    """
    check_mass_and_mean(tau, routing, tol=DECISION_TOL, strict=True)
    q_measure = routing.time_measure()
    for mass in criterion_breakpoints(q_measure, tau):
        fleet_side = partial_expectation(initial_section(q_measure, mass))
        offer_side = partial_expectation(initial_section(tau, mass))
        if fleet_side > offer_side + DECISION_TOL:
            return False
    return True
