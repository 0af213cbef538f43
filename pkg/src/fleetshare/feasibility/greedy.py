"""Greedy feasibility test for offer profiles.

The test consumes the offer distribution τ from the left. At every step
the shortest route still carrying flow (t_1) is paired with the route
t_{n+1} that brackets the leftmost remaining offers, and each offer t in
[t_n, t_{n+1}) is served by the two-point mixture

    α_1(t) = (t_{n+1} − t) / (t_{n+1} − t_1),  α_{n+1}(t) = (t − t_1) / (t_{n+1} − t_1)

until one of the two routes runs out of flow or the bracket is exhausted.
The profile is feasible exactly when τ is used up without ever placing
mass below the shortest remaining time.

Routes with equal times are merged before the search and split back
proportionally to their flows afterwards.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from fleetshare.errors import DimensionMismatchError
from fleetshare.feasibility.models import (
    FeasibilityResult,
    MixedRouting,
    OfferProfile,
    Routing,
    SimplexComponent,
    SimplexMeasure,
    check_mass_and_mean,
)
from fleetshare.measures.discrete import (
    DECISION_TOL,
    MASS_TOL,
    DiscreteMeasure,
    canonicalize,
    subtract,
)

__all__ = ["feasible", "feasible_not_exceeding", "feasible_mixed"]


@dataclass
class _Piece:
    """Component in merged-route coordinates."""

    mass: float
    coefficients: dict[int, float]
    location: float


def feasible(routing: Routing, tau: DiscreteMeasure) -> FeasibilityResult:
    """Decide whether the offer distribution ``tau`` is realizable.

    Parameters
    ----------
    routing : Routing
        Fleet flows and route times.
    tau : DiscreteMeasure
        Distribution of offered mean travel times.

    Returns
    -------
    FeasibilityResult
        ``(True, ν)`` with ν generating ``tau``, or ``(False, partial ν)``.

    Raises
    ------
    IncompatibleProfileError
        If ``tau`` differs from the fleet size or mean time beyond 1e-9.

    Examples
    --------
    >>> from fleetshare.measures import canonicalize
    >>> routing = Routing.of([0.25, 0.5, 0.25], [10, 20, 30])
    >>> feasible(routing, canonicalize([(20, 1.0)])).feasible
    True
    >>> feasible(routing, canonicalize([(10, 0.5), (30, 0.5)])).feasible
    False
    """
    check_mass_and_mean(tau, routing, tol=DECISION_TOL, strict=True)
    return _run(routing, tau, not_exceeding=False)


def feasible_not_exceeding(routing: Routing, tau: DiscreteMeasure) -> FeasibilityResult:
    """Decide whether every driver can be served no slower than offered.

    Offers above the longest remaining route time are accepted and the
    corresponding drivers are placed on the remaining routes, longest
    first. Components covering such drivers keep the offered time as
    their ``location``; their own mean time is smaller.

    Raises
    ------
    IncompatibleProfileError
        If the masses differ or the offers are faster on average than the routing.
    """
    check_mass_and_mean(tau, routing, tol=DECISION_TOL, strict=False)
    return _run(routing, tau, not_exceeding=True)


def feasible_mixed(mix: MixedRouting, profiles: Sequence[OfferProfile]) -> bool:
    """Return True when every component's profile is feasible for its routing.

    A mixed routing whose components are each feasible realizes the mixture
    of their profiles.

    Raises
    ------
    DimensionMismatchError
        If the number of profiles differs from the number of components.
    IncompatibleProfileError
        Propagated from a component check.
    """
    if len(profiles) != len(mix.components):
        raise DimensionMismatchError(
            f"{len(profiles)} profiles given for {len(mix.components)} components"
        )
    return all(
        feasible(routing, profile.induced_distribution()).feasible
        for (_, routing), profile in zip(mix.components, profiles, strict=True)
    )


# ---------------------------------------------------------------------------
# Core search
# ---------------------------------------------------------------------------


def _run(routing: Routing, tau: DiscreteMeasure, *, not_exceeding: bool) -> FeasibilityResult:
    groups, times, flows = _merge_routes(routing)
    ok, pieces = _greedy(times, flows, tau, not_exceeding=not_exceeding)
    components = tuple(_expand(piece, groups, routing) for piece in pieces if piece.mass > 0)
    return FeasibilityResult(ok, SimplexMeasure(components))


def _merge_routes(routing: Routing) -> tuple[list[list[int]], list[float], list[float]]:
    """Sort routes by time and merge equal times."""
    order = sorted(range(routing.route_count), key=lambda r: (routing.times[r], r))
    groups: list[list[int]] = []
    times: list[float] = []
    flows: list[float] = []
    for r in order:
        if times and abs(routing.times[r] - times[-1]) <= MASS_TOL:
            groups[-1].append(r)
            flows[-1] += routing.flows[r]
        else:
            groups.append([r])
            times.append(routing.times[r])
            flows.append(routing.flows[r])
    return groups, times, flows


def _expand(piece: _Piece, groups: list[list[int]], routing: Routing) -> SimplexComponent:
    """Map a merged-route component back onto the original routes."""
    point = [0.0] * routing.route_count
    for k, coefficient in piece.coefficients.items():
        members = groups[k]
        group_flow = sum(routing.flows[r] for r in members)
        for r in members:
            share = routing.flows[r] / group_flow if group_flow > 0 else 1.0 / len(members)
            point[r] += coefficient * share
    return SimplexComponent(piece.mass, tuple(point), piece.location)


def _greedy(
    times: list[float],
    flows: list[float],
    tau: DiscreteMeasure,
    *,
    not_exceeding: bool,
) -> tuple[bool, list[_Piece]]:
    q = list(flows)
    active = [k for k in range(len(times)) if q[k] > MASS_TOL]
    remaining = tau
    pieces: list[_Piece] = []
    max_steps = 2 * (len(times) + len(tau.atoms)) + 4

    for _ in range(max_steps):
        active = [k for k in active if q[k] > MASS_TOL]
        if remaining.total_mass() <= MASS_TOL:
            return True, pieces
        if not active:
            return False, pieces

        t_first, t_last = times[active[0]], times[active[-1]]
        if remaining.mass_below(t_first) > DECISION_TOL:
            return False, pieces
        remaining = _drop_below(remaining, t_first)

        in_range = [(loc, w) for loc, w in remaining.atoms if loc <= t_last]
        above = remaining.total_mass() - sum(w for _, w in in_range)
        if not in_range:
            if not not_exceeding or above <= DECISION_TOL:
                return above <= DECISION_TOL, pieces
            return _assign_leftovers(remaining, times, q, active, pieces)
        if not not_exceeding and above > DECISION_TOL:
            return False, pieces

        if len(active) == 1:
            k = active[0]
            location, weight = in_range[0]
            take = min(q[k], weight)
            pieces.append(_Piece(take, {k: 1.0}, location))
            q[k] = 0.0 if take >= q[k] else q[k] - take
            remaining = subtract(remaining, canonicalize([(location, take)]))
            continue

        first, partner, bracket = _bracket(times, active, in_range)
        remaining = _consume_bracket(times, q, first, partner, bracket, remaining, pieces)

    raise RuntimeError(f"feasibility search exceeded {max_steps} steps")


def _drop_below(measure: DiscreteMeasure, x: float) -> DiscreteMeasure:
    """Remove atoms below ``x`` (numerical dust only)."""
    return DiscreteMeasure(tuple((loc, w) for loc, w in measure.atoms if loc >= x))


def _bracket(
    times: list[float],
    active: list[int],
    in_range: list[tuple[float, float]],
) -> tuple[int, int, list[tuple[float, float]]]:
    """Find the first interval [t_n, t_{n+1}) holding mass; the last interval is closed."""
    last = len(active) - 2
    for n in range(last + 1):
        lower, upper = times[active[n]], times[active[n + 1]]
        bracket = [
            (loc, w) for loc, w in in_range if lower <= loc and (loc < upper or (n == last))
        ]
        if bracket:
            return active[0], active[n + 1], bracket
    raise RuntimeError("no bracketing interval found for in-range mass")


def _consume_bracket(
    times: list[float],
    q: list[float],
    first: int,
    partner: int,
    bracket: list[tuple[float, float]],
    remaining: DiscreteMeasure,
    pieces: list[_Piece],
) -> DiscreteMeasure:
    """Serve the bracket's offers until route ``first`` or ``partner`` runs out."""
    t_first, t_partner = times[first], times[partner]
    span = t_partner - t_first
    coefficients = [((t_partner - loc) / span, (loc - t_first) / span) for loc, _ in bracket]
    weights = [w for _, w in bracket]
    total = sum(weights)

    reach_first = _first_reach([c[0] for c in coefficients], weights, q[first])
    reach_partner = _first_reach([c[1] for c in coefficients], weights, q[partner])
    m_min = min(
        total,
        reach_first if reach_first is not None else total,
        reach_partner if reach_partner is not None else total,
    )

    taken: list[tuple[float, float]] = []
    used = 0.0
    for (location, weight), (c_first, c_partner) in zip(bracket, coefficients, strict=True):
        piece = min(weight, m_min - used)
        if piece <= 0.0:
            break
        used += piece
        taken.append((location, piece))
        pieces.append(_Piece(piece, {first: c_first, partner: c_partner}, location))
        q[first] -= c_first * piece
        q[partner] -= c_partner * piece

    if reach_first is not None and reach_first <= m_min:
        q[first] = 0.0
    if reach_partner is not None and reach_partner <= m_min:
        q[partner] = 0.0
    for k in (first, partner):
        if abs(q[k]) <= MASS_TOL:
            q[k] = 0.0
    return subtract(remaining, canonicalize(taken))


def _first_reach(slopes: list[float], weights: list[float], target: float) -> float | None:
    """Smallest m at which Σ slope·mass over the first m units reaches ``target``."""
    consumed = 0.0
    level = 0.0
    for slope, weight in zip(slopes, weights, strict=True):
        if slope > 0.0 and level + slope * weight >= target - MASS_TOL:
            return consumed + min(weight, max(0.0, (target - level) / slope))
        level += slope * weight
        consumed += weight
    return None


def _assign_leftovers(
    remaining: DiscreteMeasure,
    times: list[float],
    q: list[float],
    active: list[int],
    pieces: list[_Piece],
) -> tuple[bool, list[_Piece]]:
    """Place drivers offered more than every remaining time, longest routes first."""
    routes = sorted(active, key=lambda k: times[k], reverse=True)
    capacity = {k: q[k] for k in routes}
    route_index = 0
    for location, weight in reversed(remaining.atoms):
        left = weight
        while left > MASS_TOL and route_index < len(routes):
            k = routes[route_index]
            piece = min(left, capacity[k])
            if piece > 0.0:
                pieces.append(_Piece(piece, {k: 1.0}, location))
                capacity[k] -= piece
                left -= piece
            if capacity[k] <= MASS_TOL:
                route_index += 1
        if left > DECISION_TOL:
            return False, pieces
    return True, pieces
