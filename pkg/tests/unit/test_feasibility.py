"""Tests for offer profiles, feasibility tests, assignment plans and 2RMAX."""

from collections.abc import Callable

import numpy as np
import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from fleetshare.errors import (
    DimensionMismatchError,
    EqualTimesError,
    GenerationMismatchError,
    IncompatibleProfileError,
)
from fleetshare.feasibility import (
    AssignmentPlan,
    MixedRouting,
    OfferProfile,
    Routing,
    SimplexComponent,
    SimplexMeasure,
    criterion_breakpoints,
    feasible,
    feasible_by_criterion,
    feasible_mixed,
    feasible_not_exceeding,
    plan_from_simplex_measure,
    symmetric_acceptance_bound,
    symmetric_plan,
    symmetric_profile,
    two_rmax,
    two_rmax_measure,
    two_route_plan,
)
from fleetshare.measures import DiscreteMeasure, canonicalize, initial_section, partial_expectation


@pytest.fixture
def three_route() -> Routing:
    """Flows (0.25, 0.5, 0.25) on times (10, 20, 30)."""
    return Routing.of([0.25, 0.5, 0.25], [10.0, 20.0, 30.0])


def _lp_feasible(
    routing: Routing, tau: DiscreteMeasure, *, not_exceeding: bool = False, slack: float = 0.0
) -> bool:
    """Brute-force transport LP: split every offer atom over the routes.

    With ``not_exceeding`` the time rows become upper bounds, loosened by
    ``slack`` per unit of mass.
    """
    atoms, size = tau.atoms, routing.route_count
    times = np.array(routing.times)
    eq_rows, eq_rhs, ub_rows, ub_rhs = [], [], [], []
    for k, (location, weight) in enumerate(atoms):
        mass_row = np.zeros(len(atoms) * size)
        mass_row[k * size : (k + 1) * size] = 1.0
        time_row = np.zeros(len(atoms) * size)
        time_row[k * size : (k + 1) * size] = times
        eq_rows.append(mass_row)
        eq_rhs.append(weight)
        if not_exceeding:
            ub_rows.append(time_row)
            ub_rhs.append(weight * (location + slack))
        else:
            eq_rows.append(time_row)
            eq_rhs.append(weight * location)
    for r, flow in enumerate(routing.flows):
        flow_row = np.zeros(len(atoms) * size)
        flow_row[r::size] = 1.0
        eq_rows.append(flow_row)
        eq_rhs.append(flow)
    result = linprog(
        np.zeros(len(atoms) * size),
        A_ub=np.array(ub_rows) if ub_rows else None,
        b_ub=np.array(ub_rhs) if ub_rhs else None,
        A_eq=np.array(eq_rows),
        b_eq=np.array(eq_rhs),
        bounds=(0, None),
        method="highs",
    )
    return bool(result.status == 0)


def _criterion_margin(routing: Routing, tau: DiscreteMeasure) -> float:
    q_measure = routing.time_measure()
    return min(
        partial_expectation(initial_section(tau, m))
        - partial_expectation(initial_section(q_measure, m))
        for m in criterion_breakpoints(q_measure, tau)
    )


def _assert_generates(measure: SimplexMeasure, routing: Routing, tau: DiscreteMeasure) -> None:
    generated = measure.generated_distribution(routing.times)
    assert generated.locations == tau.locations
    assert generated.weights == pytest.approx(tau.weights, abs=1e-9)
    assert measure.route_flows() == pytest.approx(routing.flows, abs=1e-9)


@st.composite
def plan_instances(draw: st.DrawFn) -> tuple[Routing, DiscreteMeasure]:
    """Routing and offer distribution taken from a random assignment plan."""
    size = draw(st.integers(min_value=2, max_value=5))
    times = sorted(draw(st.lists(st.integers(1, 30), min_size=size, max_size=size, unique=True)))
    drivers = draw(st.integers(min_value=1, max_value=8))
    weights = [draw(st.integers(1, 4)) / 4 for _ in range(drivers)]
    rows = []
    for _ in range(drivers):
        raw = draw(st.lists(st.integers(0, 3), min_size=size, max_size=size))
        if not any(raw):
            raw[draw(st.integers(0, size - 1))] = 1
        rows.append([x / sum(raw) for x in raw])
    flows = [sum(w * row[r] for w, row in zip(weights, rows, strict=True)) for r in range(size)]
    routing = Routing.of(flows, times)
    tau = canonicalize(
        (sum(a * t for a, t in zip(row, times, strict=True)), w)
        for w, row in zip(weights, rows, strict=True)
    )
    return routing, tau


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------


@pytest.mark.unit
def test_routing_statistics(three_route: Routing) -> None:
    """Test totals, mean time and extreme times of a routing."""
    assert three_route.total_flow == 1.0
    assert three_route.total_time == pytest.approx(20.0)
    assert three_route.mean_time == pytest.approx(20.0)
    assert (three_route.t_min, three_route.t_max) == (10.0, 30.0)
    assert three_route.time_measure().atoms == ((10.0, 0.25), (20.0, 0.5), (30.0, 0.25))


@pytest.mark.unit
def test_routing_rejects_bad_shapes() -> None:
    """Test that routings validate lengths and signs."""
    with pytest.raises(DimensionMismatchError):
        Routing.of([0.5, 0.5], [1.0])
    with pytest.raises(ValueError, match=">= 0"):
        Routing.of([-0.1, 1.1], [1.0, 2.0])


@pytest.mark.unit
def test_mixed_routing_distributions() -> None:
    """Test expected times and per-route time distributions of a mixture."""
    mix = MixedRouting(
        (
            (0.5, Routing.of([0.9, 0.1], [1.9, 1.1])),
            (0.5, Routing.of([0.1, 0.9], [1.1, 1.9])),
        )
    )

    assert mix.route_count == 2
    assert mix.probabilities == (0.5, 0.5)
    assert mix.expected_times() == pytest.approx((1.5, 1.5))
    first, second = mix.route_time_distributions()
    assert first.atoms == ((1.1, 0.5), (1.9, 0.5))
    assert second.atoms == ((1.1, 0.5), (1.9, 0.5))
    assert mix.mean_fleet_time() == pytest.approx(0.5 * 1.82 + 0.5 * 1.82)


@pytest.mark.unit
def test_mixed_routing_probabilities_must_sum_to_one() -> None:
    """Test that component probabilities are validated."""
    routing = Routing.of([1.0], [1.0])
    with pytest.raises(ValueError, match="sum to 1"):
        MixedRouting(((0.4, routing), (0.4, routing)))


@pytest.mark.unit
def test_offer_profile_from_distribution() -> None:
    """Test one synthetic driver class per atom."""
    profile = OfferProfile.from_distribution(canonicalize([(30, 0.5), (10, 0.5)]))

    assert profile.driver_ids == ("atom_1", "atom_2")
    assert profile.offer_of("atom_1") == 10.0
    assert profile.mean_offer == pytest.approx(20.0)


@pytest.mark.unit
def test_offer_profile_rejects_duplicate_ids() -> None:
    """Test that driver identifiers are unique."""
    with pytest.raises(ValueError, match="unique"):
        OfferProfile.from_offers([("a", 0.5, 1.0), ("a", 0.5, 2.0)])


@pytest.mark.unit
def test_check_compatible(
    make_routing: Callable[..., Routing],
    make_profile: Callable[..., OfferProfile],
) -> None:
    """Test the fleet-size and mean-time compatibility check."""
    routing = make_routing()
    make_profile([(0.5, 2.0), (0.5, 2.5)]).check_compatible(routing)

    with pytest.raises(IncompatibleProfileError, match="fleet size"):
        make_profile([(0.6, 2.0), (0.5, 2.5)]).check_compatible(routing)
    with pytest.raises(IncompatibleProfileError, match="total time"):
        make_profile([(0.5, 2.0), (0.5, 2.0)]).check_compatible(routing)


@pytest.mark.unit
def test_simplex_component_validation() -> None:
    """Test that component points lie on the simplex."""
    with pytest.raises(ValueError, match="sum to 1"):
        SimplexComponent(1.0, (0.5, 0.4))
    with pytest.raises(ValueError, match="negative"):
        SimplexComponent(1.0, (1.5, -0.5))


@pytest.mark.unit
def test_assignment_plan_residuals(
    make_routing: Callable[..., Routing],
    make_profile: Callable[..., OfferProfile],
) -> None:
    """Test plan residuals against flows, row sums and offers."""
    routing = make_routing()
    plan = AssignmentPlan.from_matrix([[1.0, 0.0], [0.0, 1.0]], routing, weights=[0.5, 0.5])

    assert plan.driver_ids == ("1", "2")
    assert plan.mean_times() == (2.0, 2.5)
    assert plan.check(make_profile([(0.5, 2.0), (0.5, 2.5)]))

    residuals = plan.residuals(make_profile([(0.5, 2.25), (0.5, 2.25)]))
    assert residuals["route_flows"] == 0.0
    assert residuals["proportions"] == 0.0
    assert residuals["mean_times"] == pytest.approx(0.25)


@pytest.mark.unit
def test_induced_simplex_measure_merges_equal_rows(make_routing: Callable[..., Routing]) -> None:
    """Test that drivers with identical rows share a component."""
    plan = AssignmentPlan.from_matrix(
        [[0.5, 0.5], [0.5, 0.5]], make_routing(), weights=[0.25, 0.75]
    )

    measure = plan.induced_simplex_measure()

    assert len(measure) == 1
    assert measure.components[0].mass == 1.0
    assert measure.route_flows() == (0.5, 0.5)


# ---------------------------------------------------------------------------
# Feasibility
# ---------------------------------------------------------------------------


@pytest.mark.unit
def test_spread_offers_are_infeasible(three_route: Routing) -> None:
    """Test that 0.5δ10 + 0.5δ30 cannot be realized on (10, 20, 30)."""
    tau = canonicalize([(10, 0.5), (30, 0.5)])

    result = feasible(three_route, tau)

    assert not result
    assert result.feasible is False
    assert feasible_by_criterion(three_route, tau) is False


@pytest.mark.unit
def test_concentrated_offer_is_feasible(three_route: Routing) -> None:
    """Test that offering everyone the mean time is realizable."""
    tau = canonicalize([(20, 1.0)])

    ok, measure = feasible(three_route, tau)

    assert ok
    assert feasible_by_criterion(three_route, tau)
    _assert_generates(measure, three_route, tau)


@pytest.mark.unit
def test_routing_itself_is_feasible(three_route: Routing) -> None:
    """Test that the routing's own time distribution is realizable."""
    tau = three_route.time_measure()

    ok, measure = feasible(three_route, tau)

    assert ok
    _assert_generates(measure, three_route, tau)


@pytest.mark.unit
def test_feasibility_with_unsorted_and_equal_times() -> None:
    """Test that routes are sorted and equal times merged internally."""
    routing = Routing.of([0.3, 0.2, 0.5], [5.0, 5.0, 3.0])
    tau = canonicalize([(3.0, 0.5), (5.0, 0.5)])

    ok, measure = feasible(routing, tau)

    assert ok
    _assert_generates(measure, routing, tau)
    slow = [c for c in measure if c.location == 5.0]
    assert slow[0].point == pytest.approx((0.6, 0.4, 0.0))


@pytest.mark.unit
def test_feasible_rejects_incompatible_distribution(three_route: Routing) -> None:
    """Test that the strict checks raise before searching."""
    with pytest.raises(IncompatibleProfileError):
        feasible(three_route, canonicalize([(20, 0.9)]))
    with pytest.raises(IncompatibleProfileError):
        feasible_by_criterion(three_route, canonicalize([(21, 1.0)]))


@pytest.mark.unit
def test_criterion_breakpoints(three_route: Routing) -> None:
    """Test merged cumulative masses of both measures."""
    breakpoints = criterion_breakpoints(
        three_route.time_measure(), canonicalize([(15, 0.5), (25, 0.5)])
    )

    assert breakpoints == [0.0, 0.25, 0.5, 0.75, 1.0]


@pytest.mark.unit
def test_not_exceeding_places_slow_offers(make_routing: Callable[..., Routing]) -> None:
    """Test that offers above every route time are served faster."""
    routing = make_routing()
    tau = canonicalize([(2.5, 1.0)])

    ok, measure = feasible_not_exceeding(routing, tau)

    assert ok
    assert measure.route_flows() == pytest.approx((0.5, 0.5))
    assert {c.location for c in measure} == {2.5}
    assert sorted(c.mean_time(routing.times) for c in measure) == [2.0, 2.5]


@pytest.mark.unit
def test_not_exceeding_rejects_offers_below_fastest_route(
    make_routing: Callable[..., Routing],
) -> None:
    """Test that an offer faster than t_min is never realizable."""
    assert not feasible_not_exceeding(make_routing(), canonicalize([(1.9, 0.5), (3.0, 0.5)]))


@pytest.mark.unit
def test_not_exceeding_rejects_faster_mean(make_routing: Callable[..., Routing]) -> None:
    """Test that offers faster on average than the routing raise."""
    with pytest.raises(IncompatibleProfileError, match="below"):
        feasible_not_exceeding(make_routing(), canonicalize([(2.0, 1.0)]))


def _shift_offers(tau: DiscreteMeasure, shifts: list[float]) -> DiscreteMeasure:
    return canonicalize(
        (location + shift, weight)
        for (location, weight), shift in zip(tau.atoms, shifts, strict=True)
    )


@pytest.mark.unit
@settings(
    max_examples=1000,
    deadline=None,
    suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow],
)
@given(plan_instances(), st.data())
def test_not_exceeding_agrees_with_transport_lp(
    instance: tuple[Routing, DiscreteMeasure], data: st.DataObject
) -> None:
    """Test the not-exceeding greedy against an LP with upper-bounded time rows."""
    routing, tau = instance
    steps = st.sampled_from([-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 3.0])
    shifts = data.draw(st.lists(steps, min_size=len(tau.atoms), max_size=len(tau.atoms)))
    offers = _shift_offers(tau, shifts)
    assume(sum(x * w for x, w in offers.atoms) >= routing.total_time - 1e-9)
    tight = _lp_feasible(routing, offers, not_exceeding=True, slack=-1e-6)
    loose = _lp_feasible(routing, offers, not_exceeding=True, slack=1e-6)
    assume(tight == loose)

    ok, measure = feasible_not_exceeding(routing, offers)

    assert ok is tight
    if ok:
        assert measure.route_flows() == pytest.approx(routing.flows, abs=1e-9)
        for component in measure:
            assert component.mean_time(routing.times) <= component.location + 1e-9


@pytest.mark.unit
@settings(
    max_examples=1000,
    deadline=None,
    suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow],
)
@given(plan_instances(), st.data())
def test_not_exceeding_feasibility_is_monotone(
    instance: tuple[Routing, DiscreteMeasure], data: st.DataObject
) -> None:
    """Test that raising any offers of a feasible profile keeps it feasible."""
    routing, tau = instance
    size = len(tau.atoms)
    down = st.sampled_from([-1.0, -0.5, 0.0, 0.5])
    offers = _shift_offers(tau, data.draw(st.lists(down, min_size=size, max_size=size)))
    assume(sum(x * w for x, w in offers.atoms) >= routing.total_time - 1e-9)
    assume(feasible_not_exceeding(routing, offers).feasible)
    up = st.sampled_from([0.0, 0.25, 1.0, 4.0])
    raised = _shift_offers(
        offers, data.draw(st.lists(up, min_size=len(offers.atoms), max_size=len(offers.atoms)))
    )

    assert feasible_not_exceeding(routing, raised).feasible


@pytest.mark.unit
def test_feasible_mixed(make_profile: Callable[..., OfferProfile]) -> None:
    """Test component-wise feasibility of a mixed routing."""
    mix = MixedRouting(
        (
            (0.5, Routing.of([0.5, 0.5], [2.0, 2.5])),
            (0.5, Routing.of([1.0, 0.0], [1.0, 3.0])),
        )
    )
    symmetric = make_profile([(0.5, 2.25), (0.5, 2.25)])
    fastest = make_profile([(1.0, 1.0)])

    assert feasible_mixed(mix, [symmetric, fastest])
    assert not feasible_mixed(mix, [make_profile([(0.5, 1.5), (0.5, 3.0)]), fastest])
    with pytest.raises(DimensionMismatchError):
        feasible_mixed(mix, [symmetric])


@pytest.mark.unit
@settings(max_examples=1000, deadline=None)
@given(plan_instances())
def test_plan_offers_are_feasible(instance: tuple[Routing, DiscreteMeasure]) -> None:
    """Test that offers read off an assignment plan are always realizable."""
    routing, tau = instance

    ok, measure = feasible(routing, tau)

    assert ok
    assert feasible_by_criterion(routing, tau)
    _assert_generates(measure, routing, tau)


@pytest.mark.unit
@settings(
    max_examples=1000,
    deadline=None,
    suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow],
)
@given(plan_instances(), st.data())
def test_greedy_agrees_with_transport_lp(
    instance: tuple[Routing, DiscreteMeasure], data: st.DataObject
) -> None:
    """Test greedy, criterion and a brute-force LP on mean-preserving spreads."""
    routing, tau = instance
    assume(len(tau.atoms) >= 2)
    indices = st.lists(st.sampled_from(range(len(tau.atoms))), min_size=2, max_size=2, unique=True)
    i, j = sorted(data.draw(indices))
    shift = data.draw(st.floats(min_value=0.0, max_value=10.0))
    atoms = list(tau.atoms)
    (low, w_low), (high, w_high) = atoms[i], atoms[j]
    atoms[i] = (low - shift, w_low)
    atoms[j] = (high + shift * w_low / w_high, w_high)
    spread = canonicalize(atoms)

    margin = _criterion_margin(routing, spread)
    assume(margin > -1e-9 or margin < -1e-4)

    expected = _lp_feasible(routing, spread)
    assert feasible(routing, spread).feasible is expected
    assert feasible_by_criterion(routing, spread) is expected


# ---------------------------------------------------------------------------
# Plans
# ---------------------------------------------------------------------------


@pytest.mark.unit
def test_plan_from_simplex_measure(three_route: Routing) -> None:
    """Test that a generating measure yields a plan meeting every offer."""
    profile = OfferProfile.from_offers([("a", 0.5, 15.0), ("b", 0.25, 25.0), ("c", 0.25, 25.0)])
    ok, measure = feasible(three_route, profile.induced_distribution())
    assert ok

    plan = plan_from_simplex_measure(measure, profile, three_route)

    assert plan.check(profile)
    assert plan.proportions[1] == plan.proportions[2]


@pytest.mark.unit
def test_plan_from_foreign_measure_raises(three_route: Routing) -> None:
    """Test that a measure generating another distribution is rejected."""
    _, measure = feasible(three_route, canonicalize([(20, 1.0)]))
    profile = OfferProfile.from_offers([("a", 0.5, 15.0), ("b", 0.5, 25.0)])

    with pytest.raises(GenerationMismatchError):
        plan_from_simplex_measure(measure, profile, three_route)


@pytest.mark.unit
def test_two_route_plan(
    make_routing: Callable[..., Routing],
    make_profile: Callable[..., OfferProfile],
) -> None:
    """Test the closed-form two-route plan."""
    profile = make_profile([(0.25, 2.0), (0.5, 2.25), (0.25, 2.5)])

    plan = two_route_plan(profile, make_routing())

    assert plan.proportions == ((1.0, 0.0), (0.5, 0.5), (0.0, 1.0))
    assert plan.check(profile)


@pytest.mark.unit
def test_two_route_plan_equal_times_has_fallback(
    make_routing: Callable[..., Routing],
    make_profile: Callable[..., OfferProfile],
) -> None:
    """Test that equal route times raise with the proportional plan attached."""
    routing = make_routing(flows=(0.25, 0.75), times=(2.0, 2.0))

    with pytest.raises(EqualTimesError) as excinfo:
        two_route_plan(make_profile([(0.5, 2.0), (0.5, 2.0)]), routing)

    fallback = excinfo.value.fallback
    assert isinstance(fallback, AssignmentPlan)
    assert fallback.proportions == ((0.25, 0.75), (0.25, 0.75))


@pytest.mark.unit
def test_two_route_plan_rejects_out_of_range_offer(
    make_routing: Callable[..., Routing],
    make_profile: Callable[..., OfferProfile],
) -> None:
    """Test that offers outside [t_min, t_max] raise."""
    with pytest.raises(IncompatibleProfileError, match="outside"):
        two_route_plan(make_profile([(0.5, 1.9), (0.5, 2.6)]), make_routing())


@pytest.mark.unit
def test_two_route_plan_needs_two_routes(three_route: Routing) -> None:
    """Test the route-count check."""
    with pytest.raises(DimensionMismatchError):
        two_route_plan(OfferProfile.from_offers([("a", 1.0, 20.0)]), three_route)


@pytest.mark.unit
def test_symmetric_offer(make_routing: Callable[..., Routing]) -> None:
    """Test the symmetric offer t̄ and its acceptance bound t_min / t̄."""
    routing = make_routing()
    drivers = [("a", 0.3), ("b", 0.7)]

    profile = symmetric_profile(routing, drivers)
    plan = symmetric_plan(routing, drivers)

    assert {d.offer for d in profile} == {2.25}
    assert plan.check(profile)
    assert symmetric_acceptance_bound(routing) == pytest.approx(8 / 9)


# ---------------------------------------------------------------------------
# Two-route reduction
# ---------------------------------------------------------------------------


@pytest.mark.unit
def test_two_rmax_three_routes() -> None:
    """Test the reduction of the proportional point on (10, 20, 30)."""
    assert two_rmax([0.25, 0.5, 0.25], [10, 20, 30]) == [
        (0.5, (0.5, 0.0, 0.5)),
        (0.5, (0.0, 1.0, 0.0)),
    ]


@pytest.mark.unit
def test_two_rmax_input_checks() -> None:
    """Test length and ordering checks."""
    with pytest.raises(DimensionMismatchError):
        two_rmax([0.5, 0.5], [1.0])
    with pytest.raises(ValueError, match="increasing"):
        two_rmax([0.5, 0.5], [2.0, 1.0])
    assert two_rmax([0.0, 0.0], [1.0, 2.0]) == []


@st.composite
def rmax_cases(draw: st.DrawFn) -> tuple[list[float], list[float]]:
    """Route weights and increasing times, either on the simplex scale or as raw flows."""
    n = draw(st.integers(min_value=2, max_value=6))
    if draw(st.booleans()):
        weights = draw(st.lists(st.floats(0.0, 1.0), min_size=n, max_size=n))
        ticks = draw(st.lists(st.integers(1, 50), min_size=n, max_size=n, unique=True))
        times = [float(t) for t in sorted(ticks)]
    else:
        weights = draw(st.lists(st.floats(0.0, 3000.0), min_size=n, max_size=n))
        steps = draw(st.lists(st.floats(100.0, 1000.0), min_size=n, max_size=n))
        times = [float(t) for t in np.cumsum(steps)]
    if sum(weights) <= 0.01:
        weights[draw(st.integers(0, n - 1))] = 1.0
    return weights, times


@pytest.mark.unit
@settings(max_examples=1000, deadline=None)
@given(rmax_cases())
def test_two_rmax_properties(case: tuple[list[float], list[float]]) -> None:
    """Test masses, support size, mean times and reconstruction of 2RMAX."""
    weights, times = case
    total = sum(weights)
    target = sum(c * t for c, t in zip(weights, times, strict=True)) / total
    tol = 1e-9 * max(1.0, total)

    parts = two_rmax(weights, times)

    assert sum(mass for mass, _ in parts) == pytest.approx(total, abs=tol)
    rebuilt = np.sum([mass * np.array(point) for mass, point in parts], axis=0)
    assert rebuilt == pytest.approx(weights, abs=tol)
    for mass, point in parts:
        assert mass > 0
        assert sum(1 for a in point if a > 0) <= 2
        assert sum(a * t for a, t in zip(point, times, strict=True)) == pytest.approx(
            target, rel=1e-9
        )


@pytest.mark.unit
def test_two_rmax_on_raw_flows() -> None:
    """Test that flow-scale weights reduce like their normalized counterparts."""
    flows = [1000.0, 2000.0, 1000.0]
    times = [100.0, 200.0, 300.0]

    parts = two_rmax(flows, times)

    assert [mass for mass, _ in parts] == pytest.approx([2000.0, 2000.0])
    assert [point for _, point in parts] == [(0.5, 0.0, 0.5), (0.0, 1.0, 0.0)]

@pytest.mark.unit
def test_two_rmax_measure_keeps_generated_distribution(three_route: Routing) -> None:
    """Test that reducing a measure keeps flows and covered offers."""
    measure = SimplexMeasure((SimplexComponent(1.0, (0.25, 0.5, 0.25)),))

    reduced = two_rmax_measure(measure, three_route.times)

    assert len(reduced) == 2
    assert reduced.route_flows() == pytest.approx(three_route.flows)
    assert reduced.generated_distribution(three_route.times).atoms == ((20.0, 1.0),)
