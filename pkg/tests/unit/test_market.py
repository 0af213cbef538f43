"""Tests for utilities, full-market offers, mixed routings and staged market entry."""

from collections.abc import Callable

import pytest

from fleetshare.errors import (
    DimensionMismatchError,
    IncompatibleProfileError,
    InfeasibleOfferError,
    RuleIncompleteError,
)
from fleetshare.feasibility import MixedRouting, Routing, two_route_plan
from fleetshare.market import (
    DiscountProfile,
    DriverAttitude,
    EquilibriumVerdict,
    MimicHDV,
    Mode,
    NestedVerdict,
    OfferVerdict,
    StackelbergMix,
    StageKind,
    TailoredOffer,
    VerdictKind,
    check_rule,
    dynamic_stages,
    full_market_offer,
    general_utility_pair,
    hdv_disutility,
    market_share,
    mixed_market_analysis,
    necessary_condition,
    preprocess_small_gamma,
    tailored_offer_two_routes,
)
from fleetshare.measures import canonicalize
from fleetshare.network import AffineDelay, Network
from fleetshare.risk import PenaltySpec


@pytest.fixture
def system_optimum() -> Routing:
    """System optimum of t_A = 1 + 2q, t_B = 2 + q at unit demand."""
    return Routing.of([0.5, 0.5], [2.0, 2.5])


@pytest.fixture
def alternating() -> MixedRouting:
    """Two equally likely components sending 0.9 of the fleet to alternate routes."""
    return MixedRouting(
        (
            (0.5, Routing.of([0.9, 0.1], [1.9, 1.1])),
            (0.5, Routing.of([0.1, 0.9], [1.1, 1.9])),
        )
    )


@pytest.fixture
def split_population(make_population: Callable[..., DiscountProfile]) -> DiscountProfile:
    """Enthusiastic majority (γ = 0.7) and reluctant minority (γ = 1.3)."""
    return make_population([("enthusiastic", 0.9, 0.7), ("reluctant", 0.1, 1.3)])


ALTERNATING_RULE = {"enthusiastic": [0, 1], "reluctant": [1, 0]}


# ---------------------------------------------------------------------------
# Models and utilities
# ---------------------------------------------------------------------------


@pytest.mark.unit
def test_discount_profile_statistics(make_population: Callable[..., DiscountProfile]) -> None:
    """Test total weight, E(1/γ) and subsets."""
    population = make_population([("indifferent", 0.5, 1.0), ("keen", 0.5, 0.8)])

    assert population.total_weight == 1.0
    assert population.mean_inverse_gamma() == pytest.approx(9 / 8)
    assert population.subset(["keen"]).driver_ids == ("keen",)
    assert population.get("keen").gamma == 0.8
    with pytest.raises(KeyError):
        population.get("missing")


@pytest.mark.unit
def test_driver_attitude_validation() -> None:
    """Test parameter checks of a driver attitude."""
    with pytest.raises(ValueError, match="gamma"):
        DriverAttitude("a", 1.0, 0.0)
    with pytest.raises(ValueError, match="weight"):
        DriverAttitude("a", -1.0, 1.0)
    with pytest.raises(ValueError, match="unique"):
        DiscountProfile.from_gammas([("a", 0.5, 1.0), ("a", 0.5, 0.9)])


@pytest.mark.unit
def test_utility_pair_with_constants_and_preferences() -> None:
    """Test the general disutilities with constant and per-route terms."""
    driver = DriverAttitude("a", 1.0, 0.8, beta=2.0, u_cav0=0.5, u_hdv0=0.25, epsilon=(1.5, 0.0))
    routes = [canonicalize([(2.0, 1.0)]), canonicalize([(2.5, 1.0)])]

    pair = general_utility_pair(driver, 2.25, routes)

    assert pair.u_cav == pytest.approx(0.5 + 0.8 * 2.0 * 2.25)
    assert pair.u_hdv == pytest.approx(0.25 + 2.0 * 2.5)
    assert pair.mode is Mode.CAV
    assert hdv_disutility(driver, routes)[0] == 1


@pytest.mark.unit
def test_hdv_disutility_breaks_ties_low() -> None:
    """Test that equal routes resolve to the lowest index."""
    driver = DriverAttitude("a", 1.0, 1.0)
    routes = [canonicalize([(1.5, 1.0)]), canonicalize([(1.5, 1.0)])]

    assert hdv_disutility(driver, routes) == (0, 1.5)


@pytest.mark.unit
def test_market_share(split_population: DiscountProfile) -> None:
    """Test member weight over population weight."""
    assert market_share(split_population, ["enthusiastic"]) == pytest.approx(0.9)
    assert market_share(split_population, []) == 0.0
    assert market_share(DiscountProfile(()), ["a"]) == 0.0


@pytest.mark.unit
def test_verdict_from_switchers() -> None:
    """Test DFHE and nested classification."""
    stable = EquilibriumVerdict.from_switchers([], [], full_share=True)
    partial = EquilibriumVerdict.from_switchers([], [], full_share=False)
    unstable = EquilibriumVerdict.from_switchers(["a"], [], full_share=True)

    assert (stable.kind, stable.nested) == (VerdictKind.DFHE, NestedVerdict.NFHE)
    assert (partial.kind, partial.nested) == (VerdictKind.DFHE, NestedVerdict.NOT_VERIFIED)
    assert unstable.kind is VerdictKind.NOT_EQUILIBRIUM
    assert unstable.to_dict()["defectors"] == ["a"]


# ---------------------------------------------------------------------------
# Full-market offers on fixed routings
# ---------------------------------------------------------------------------


@pytest.mark.unit
def test_necessary_condition(
    system_optimum: Routing, make_population: Callable[..., DiscountProfile]
) -> None:
    """Test t̄ ≤ t_min E(1/γ)."""
    assert necessary_condition(
        system_optimum, make_population([("indifferent", 0.5, 1.0), ("keen", 0.5, 0.8)])
    )
    assert not necessary_condition(system_optimum, make_population([("all", 1.0, 1.0)]))


@pytest.mark.unit
def test_full_market_offer_tailored(
    system_optimum: Routing, make_population: Callable[..., DiscountProfile]
) -> None:
    """Test that γ = 1 rides the fast route and γ = 0.8 the slow one."""
    population = make_population([("indifferent", 0.5, 1.0), ("keen", 0.5, 0.8)])

    offer = full_market_offer(system_optimum, population)

    assert offer
    assert offer.verdict is OfferVerdict.YES
    assert offer.method == "feasible"
    assert offer.profile.offer_of("indifferent") == pytest.approx(2.0)
    assert offer.profile.offer_of("keen") == pytest.approx(2.5)
    assert offer.plan is not None
    assert offer.plan.proportions == ((1.0, 0.0), (0.0, 1.0))
    assert offer.effective is not None
    assert offer.effective.offer_of("keen") == pytest.approx(2.5)


@pytest.mark.unit
def test_full_market_offer_rejects_indifferent_population(
    system_optimum: Routing, make_population: Callable[..., DiscountProfile]
) -> None:
    """Test that γ = 1 for everyone cannot beat t_min on average."""
    offer = full_market_offer(system_optimum, make_population([("all", 1.0, 1.0)]))

    assert not offer
    assert offer.method == "mean_below"
    assert offer.plan is None


@pytest.mark.unit
def test_full_market_offer_infeasible_spread(
    make_population: Callable[..., DiscountProfile],
) -> None:
    """Test a NO settled by the feasibility search."""
    routing = Routing.of([0.25, 0.5, 0.25], [10.0, 20.0, 30.0])
    population = make_population([("fast", 0.5, 1.0), ("patient", 0.5, 1 / 3)])

    offer = full_market_offer(routing, population)

    assert offer.verdict is OfferVerdict.NO
    assert offer.method == "feasible"


@pytest.mark.unit
def test_full_market_offer_serves_faster_than_offered(
    system_optimum: Routing, make_population: Callable[..., DiscountProfile]
) -> None:
    """Test the not-exceeding branch when offers exceed the routing's total."""
    population = make_population([("a", 0.5, 0.7), ("b", 0.5, 0.7)])

    offer = full_market_offer(system_optimum, population)

    assert offer
    assert offer.method == "feasible_not_exceeding"
    assert offer.effective is not None
    for driver in offer.effective:
        assert driver.offer <= offer.profile.offer_of(driver.driver_id) + 1e-9
    assert offer.to_dict()["verdict"] == "yes"


@pytest.mark.unit
def test_tailored_offer_tight_condition(
    system_optimum: Routing, make_population: Callable[..., DiscountProfile]
) -> None:
    """Test T_i = t_min / γ_i when the necessary condition is tight."""
    population = make_population([("indifferent", 0.5, 1.0), ("keen", 0.5, 0.8)])

    profile = tailored_offer_two_routes(system_optimum, population)

    assert profile.offer_of("indifferent") == pytest.approx(2.0)
    assert profile.offer_of("keen") == pytest.approx(2.5)


@pytest.mark.unit
def test_tailored_offer_with_slack(
    system_optimum: Routing, make_population: Callable[..., DiscountProfile]
) -> None:
    """Test the scaled offers when the condition holds strictly."""
    population = make_population([("a", 0.5, 0.9), ("b", 0.5, 0.8)])

    profile = tailored_offer_two_routes(system_optimum, population)

    assert profile.mean_offer == pytest.approx(2.25)
    for driver in profile:
        assert population.get(driver.driver_id).gamma * driver.offer <= 2.0 + 1e-9
    assert two_route_plan(profile, system_optimum).check(profile)


@pytest.mark.unit
def test_tailored_offer_symmetric_and_infeasible(
    system_optimum: Routing, make_population: Callable[..., DiscountProfile]
) -> None:
    """Test the symmetric shortcut and the infeasible case."""
    symmetric = tailored_offer_two_routes(system_optimum, make_population([("a", 1.0, 0.85)]))
    assert symmetric.offer_of("a") == pytest.approx(2.25)

    with pytest.raises(InfeasibleOfferError):
        tailored_offer_two_routes(system_optimum, make_population([("a", 1.0, 0.9)]))
    with pytest.raises(ValueError, match="outside"):
        tailored_offer_two_routes(system_optimum, make_population([("a", 1.0, 0.5)]))


@pytest.mark.unit
def test_preprocess_small_gamma(
    system_optimum: Routing, make_population: Callable[..., DiscountProfile]
) -> None:
    """Test pinning of drivers who accept the slow route."""
    few = preprocess_small_gamma(
        system_optimum, make_population([("a", 0.25, 0.5), ("b", 0.75, 1.0)])
    )
    assert few.routing is not None
    assert few.routing.flows == (0.5, 0.25)
    assert few.gamma.driver_ids == ("b",)
    assert few.pinned == (("a", (0.0, 1.0)),)

    many = preprocess_small_gamma(
        system_optimum, make_population([("a", 0.6, 0.5), ("b", 0.4, 1.0)])
    )
    assert many.routing is None
    assert many.pinned_ids == ("a", "b")
    assert dict(many.pinned)["a"] == pytest.approx((1 / 6, 5 / 6))
    assert dict(many.pinned)["b"] == (1.0, 0.0)


@pytest.mark.unit
def test_two_route_helpers_need_two_routes(
    make_population: Callable[..., DiscountProfile],
) -> None:
    """Test the route-count checks."""
    routing = Routing.of([0.5, 0.25, 0.25], [1.0, 2.0, 3.0])
    population = make_population([("a", 1.0, 1.0)])

    with pytest.raises(DimensionMismatchError):
        tailored_offer_two_routes(routing, population)
    with pytest.raises(DimensionMismatchError):
        preprocess_small_gamma(routing, population)


# ---------------------------------------------------------------------------
# Mixed routings
# ---------------------------------------------------------------------------


@pytest.mark.unit
def test_mixed_routing_equilibrium(
    alternating: MixedRouting, split_population: DiscountProfile
) -> None:
    """Test utilities and verdict under alternating fleet routing."""
    analysis = mixed_market_analysis(alternating, ALTERNATING_RULE, split_population)

    assert analysis.utility_of("enthusiastic").u_cav == pytest.approx(1.33)
    assert analysis.utility_of("reluctant").u_cav == pytest.approx(1.43)
    assert analysis.utility_of("reluctant").u_hdv == pytest.approx(1.5)
    assert analysis.verdict.kind is VerdictKind.DFHE
    assert analysis.verdict.nested is NestedVerdict.NFHE
    assert analysis.hdv_route == 0


@pytest.mark.unit
def test_mixed_routing_with_schedule_risk(
    alternating: MixedRouting, split_population: DiscountProfile
) -> None:
    """Test that schedule risk raises the own-car disutility to 1.9."""
    analysis = mixed_market_analysis(
        alternating, ALTERNATING_RULE, split_population, PenaltySpec(2.0, 1.0)
    )

    assert analysis.utility_of("enthusiastic").u_hdv == pytest.approx(1.9)
    assert analysis.verdict.kind is VerdictKind.DFHE


@pytest.mark.unit
def test_mixed_routing_detects_defectors(
    alternating: MixedRouting, make_population: Callable[..., DiscountProfile]
) -> None:
    """Test that a γ above u_hdv / T defects."""
    population = make_population([("enthusiastic", 0.9, 0.7), ("reluctant", 0.1, 1.5)])

    analysis = mixed_market_analysis(alternating, ALTERNATING_RULE, population)

    assert analysis.verdict.kind is VerdictKind.NOT_EQUILIBRIUM
    assert analysis.verdict.defectors == ("reluctant",)


@pytest.mark.unit
@pytest.mark.parametrize(
    ("rule", "message"),
    [
        ({"enthusiastic": [0, 1]}, "needs one route"),
        ({"enthusiastic": [0, 1], "reluctant": [1]}, "needs one route"),
        ({"enthusiastic": [0, 2], "reluctant": [1, 0]}, "out of range"),
        ({"enthusiastic": [1, 0], "reluctant": [0, 1]}, "component 1"),
    ],
)
def test_check_rule_errors(
    alternating: MixedRouting,
    split_population: DiscountProfile,
    rule: dict[str, list[int]],
    message: str,
) -> None:
    """Test incomplete, out-of-range and flow-violating rules."""
    with pytest.raises(RuleIncompleteError, match=message):
        check_rule(alternating, rule, split_population)


# ---------------------------------------------------------------------------
# Staged market entry
# ---------------------------------------------------------------------------


@pytest.mark.unit
def test_dynamic_stages(split_population: DiscountProfile) -> None:
    """Test market entry by mimicking, mixing and a tailored offer."""
    network = Network((AffineDelay(1.0, 1.0), AffineDelay(1.0, 1.0)), demand=1.0)
    stages = [
        MimicHDV(),
        StackelbergMix(((0.5, (0.9, 0.0)), (0.5, (0.0, 0.9)))),
        TailoredOffer(1.1),
    ]

    trace = dynamic_stages(network, split_population, stages)

    assert len(trace) == 4
    assert [r.kind for r in trace] == [
        StageKind.WARDROP,
        StageKind.MIMIC_HDV,
        StageKind.STACKELBERG_MIX,
        StageKind.TAILORED_OFFER,
    ]
    assert trace.shares == pytest.approx((0.0, 0.9, 0.9, 1.0))

    initial = trace[0]
    assert initial.verdict.nested is NestedVerdict.NFHE
    assert initial.utility_of("enthusiastic").mode is Mode.HDV

    mimic = trace[1]
    assert mimic.members == ("enthusiastic",)
    assert mimic.utility_of("enthusiastic").u_cav == pytest.approx(1.05)

    mixed = trace[2]
    assert mixed.utility_of("enthusiastic").u_cav == pytest.approx(1.365)
    assert mixed.utility_of("enthusiastic").u_hdv == pytest.approx(1.5)
    assert mixed.verdict.kind is VerdictKind.DFHE

    final = trace.final
    assert dict(final.initial_offer_disutility) == pytest.approx({"reluctant": 1.365})
    assert final.utility_of("reluctant").u_cav == pytest.approx(1.43)
    assert final.utility_of("enthusiastic").u_cav == pytest.approx(1.33)
    assert final.verdict.kind is VerdictKind.DFHE
    assert final.verdict.nested is NestedVerdict.NFHE
    assert final.to_dict()["kind"] == "tailored_offer"


@pytest.mark.unit
def test_stackelberg_flows_must_match_members(split_population: DiscountProfile) -> None:
    """Test that fleet flows must add up to the member weight."""
    network = Network((AffineDelay(1.0, 1.0), AffineDelay(1.0, 1.0)), demand=1.0)
    stages = [MimicHDV(), StackelbergMix(((1.0, (0.5, 0.5)),))]

    with pytest.raises(IncompatibleProfileError, match="members"):
        dynamic_stages(network, split_population, stages)


@pytest.mark.unit
def test_stage_validation() -> None:
    """Test stage parameter checks."""
    with pytest.raises(ValueError, match="sum to 1"):
        StackelbergMix(((0.5, (1.0, 0.0)),))
    with pytest.raises(ValueError, match="bound"):
        TailoredOffer(0.0)
