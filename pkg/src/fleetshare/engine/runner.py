"""End-to-end scenario runner.

A scenario run chains six stages:

    network      Wardrop and system-optimum solves
    market       fleet strategy, utilities and equilibrium verdict
    feasibility  check that the strategy's offers are realizable
    schedule     per-driver routes over J days (integer driver scale only)
    simulation   day-to-day route travel times
    report       CSV/JSON artifacts (when an output directory is set)

Each stage is logged to the optional audit logger. A failure in any stage
yields a failed :class:`RunReport` carrying the partial results.
"""

from __future__ import annotations

import time
import traceback
from collections.abc import Iterator, Sequence
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any

from fleetshare.audit.logger import AuditLogger
from fleetshare.engine.config import ScenarioConfig, StrategyKind
from fleetshare.engine.report import RunReport, emit_csv
from fleetshare.engine.simulation import DaySimulation, mixed_schedule, simulate_days
from fleetshare.errors import NonIntegerFlowsError
from fleetshare.feasibility.greedy import feasible, feasible_mixed
from fleetshare.feasibility.models import AssignmentPlan, MixedRouting, OfferProfile, Routing
from fleetshare.feasibility.plans import (
    plan_from_simplex_measure,
    symmetric_acceptance_bound,
    symmetric_plan,
    symmetric_profile,
)
from fleetshare.market.mixed import mixed_market_analysis
from fleetshare.market.models import (
    DiscountProfile,
    EquilibriumVerdict,
    Mode,
    OfferVerdict,
    UtilityPair,
)
from fleetshare.market.offers import full_market_offer, necessary_condition
from fleetshare.market.stages import dynamic_stages
from fleetshare.market.utilities import general_utility_pair
from fleetshare.measures.discrete import DECISION_TOL, DiscreteMeasure
from fleetshare.network.equilibrium import (
    system_optimum,
    total_travel_time,
    travel_times,
    wardrop_equilibrium,
)
from fleetshare.network.models import Network
from fleetshare.risk.departure import optimal_rho
from fleetshare.risk.models import PenaltySpec
from fleetshare.scheduler.birkhoff import (
    birkhoff_decompose,
    expand_to_doubly_stochastic,
    integer_flows,
)
from fleetshare.scheduler.models import MultiDaySchedule
from fleetshare.scheduler.schedule import build_schedule, sample_schedule

__all__ = ["STAGES", "run_scenario"]

STAGES = ("network", "market", "feasibility", "schedule", "simulation", "report")


# ---------------------------------------------------------------------------
# Stage bookkeeping
# ---------------------------------------------------------------------------


@contextmanager
def _stage(logger: AuditLogger | None, name: str) -> Iterator[dict[str, int]]:
    """Stage events when logging; the yielded dict collects counters."""
    if logger is None:
        yield {}
        return
    with logger.stage(name) as counters:
        yield counters


@dataclass
class _Market:
    """Outcome of the market stage."""

    utilities: tuple[UtilityPair, ...]
    verdict: EquilibriumVerdict
    share: float
    mix: MixedRouting
    offer: OfferVerdict | None = None
    profile: OfferProfile | None = None
    plan: AssignmentPlan | None = None
    rule: dict[str, tuple[int, ...]] | None = None
    feasible: bool | None = None
    details: dict[str, Any] = field(default_factory=dict)


def _switchers(utilities: Sequence[UtilityPair]) -> tuple[list[str], list[str]]:
    defectors = [
        u.driver_id for u in utilities if u.mode is Mode.CAV and u.u_cav > u.u_hdv + DECISION_TOL
    ]
    joiners = [
        u.driver_id for u in utilities if u.mode is Mode.HDV and u.u_cav < u.u_hdv - DECISION_TOL
    ]
    return defectors, joiners


def _dirac_times(times: Sequence[float]) -> tuple[DiscreteMeasure, ...]:
    return tuple(DiscreteMeasure.dirac(t) for t in times)


def _offer_utilities(
    profile: OfferProfile,
    gamma: DiscountProfile,
    times: Sequence[float],
    penalty: PenaltySpec | None,
) -> tuple[UtilityPair, ...]:
    """Utilities of fleet members promised the mean times of ``profile``."""
    distributions = _dirac_times(times)
    return tuple(
        general_utility_pair(driver, profile.offer_of(driver.driver_id), distributions, penalty)
        for driver in gamma
    )


# ---------------------------------------------------------------------------
# Stages
# ---------------------------------------------------------------------------


def _network_stage(network: Network) -> dict[str, Any]:
    wardrop = wardrop_equilibrium(network)
    optimum = system_optimum(network)
    optimum_routing = Routing.of(optimum.flows, travel_times(network, optimum))
    return {
        "demand": network.demand,
        "wardrop": {
            "flows": list(wardrop.flows),
            "times": list(travel_times(network, wardrop)),
            "total_time": total_travel_time(network, wardrop),
        },
        "system_optimum": {
            "flows": list(optimum.flows),
            "times": list(optimum_routing.times),
            "total_time": total_travel_time(network, optimum),
            "mean_time": optimum_routing.mean_time,
        },
        "symmetric_acceptance_bound": symmetric_acceptance_bound(optimum_routing),
    }


def _fleet_routing(network: Network, flows: Sequence[float]) -> Routing:
    return Routing.of(flows, travel_times(network, flows))


def _symmetric_market(
    routing: Routing, gamma: DiscountProfile, penalty: PenaltySpec | None
) -> _Market:
    drivers = [(driver.driver_id, driver.weight) for driver in gamma]
    profile = symmetric_profile(routing, drivers)
    utilities = _offer_utilities(profile, gamma, routing.times, penalty)
    defectors, _ = _switchers(utilities)
    return _Market(
        utilities=utilities,
        verdict=EquilibriumVerdict.from_switchers(defectors, (), full_share=True),
        share=1.0,
        mix=MixedRouting.deterministic(routing),
        offer=OfferVerdict.NO if defectors else OfferVerdict.YES,
        profile=profile,
        plan=symmetric_plan(routing, drivers),
        details={"offer_method": "symmetric", "offers": profile.to_dict()},
    )


def _market_stage(config: ScenarioConfig, network: Network) -> _Market:
    strategy = config.strategy
    gamma = config.population.profile
    penalty = config.population.penalty
    kind = strategy.kind

    if kind in (StrategyKind.NONE, StrategyKind.WARDROP):
        routing = _fleet_routing(network, wardrop_equilibrium(network).flows)
        t_we = min(routing.times)
        hdv_only = kind is StrategyKind.NONE
        mode = Mode.HDV if hdv_only else Mode.CAV
        distributions = _dirac_times(routing.times)
        utilities = tuple(
            general_utility_pair(driver, t_we, distributions, penalty, mode=mode)
            for driver in gamma
        )
        defectors, joiners = _switchers(utilities)
        if hdv_only:
            # without a fleet there is nobody to join
            joiners = []
        market = _Market(
            utilities=utilities,
            verdict=EquilibriumVerdict.from_switchers(
                defectors, joiners, full_share=not hdv_only, hdv_only=hdv_only
            ),
            share=0.0 if hdv_only else 1.0,
            mix=MixedRouting.deterministic(routing),
        )
        if not hdv_only:
            drivers = [(driver.driver_id, driver.weight) for driver in gamma]
            market.profile = symmetric_profile(routing, drivers)
            market.plan = symmetric_plan(routing, drivers)
        return market

    if kind is StrategyKind.SYSTEM_OPTIMUM:
        routing = _fleet_routing(network, system_optimum(network).flows)
        return _symmetric_market(routing, gamma, penalty)

    if kind is StrategyKind.DETERMINISTIC:
        routing = _fleet_routing(network, strategy.flows)
        offer = full_market_offer(routing, gamma)
        details: dict[str, Any] = {
            "necessary_condition": necessary_condition(routing, gamma),
            "offer_method": offer.method,
            "maximal_offers": offer.profile.to_dict(),
        }
        if not offer:
            # no tailored offer keeps everyone: report the symmetric fallback
            market = _symmetric_market(routing, gamma, penalty)
            market.offer = OfferVerdict.NO
            market.details = {
                **details,
                "fallback": "symmetric",
                "offers": market.details["offers"],
            }
            return market
        effective = offer.effective or offer.profile
        utilities = _offer_utilities(effective, gamma, routing.times, penalty)
        defectors, _ = _switchers(utilities)
        details["offers"] = effective.to_dict()
        return _Market(
            utilities=utilities,
            verdict=EquilibriumVerdict.from_switchers(defectors, (), full_share=True),
            share=1.0,
            mix=MixedRouting.deterministic(routing),
            offer=OfferVerdict.YES,
            profile=effective,
            plan=offer.plan,
            details=details,
        )

    if kind is StrategyKind.OFFER:
        routing = _fleet_routing(network, strategy.flows)
        profile = OfferProfile.from_offers(
            [(name, gamma.get(name).weight, value) for name, value in strategy.offers]
        )
        result = feasible(routing, profile.induced_distribution())
        utilities = _offer_utilities(profile, gamma, routing.times, penalty)
        defectors, _ = _switchers(utilities)
        return _Market(
            utilities=utilities,
            verdict=EquilibriumVerdict.from_switchers(defectors, (), full_share=True),
            share=1.0,
            mix=MixedRouting.deterministic(routing),
            profile=profile,
            plan=(
                plan_from_simplex_measure(result.measure, profile, routing)
                if result.feasible
                else None
            ),
            feasible=result.feasible,
            details={"offers": profile.to_dict()},
        )

    if kind is StrategyKind.MIXED:
        mix = MixedRouting(
            tuple(
                (c.probability, _fleet_routing(network, c.flows)) for c in strategy.components
            )
        )
        rule = strategy.rule
        analysis = mixed_market_analysis(mix, rule, gamma, penalty)
        return _Market(
            utilities=analysis.utilities,
            verdict=analysis.verdict,
            share=1.0,
            mix=mix,
            rule=rule,
            details={
                "hdv_route": analysis.hdv_route + 1,
                "expected_times": list(mix.expected_times()),
                "mean_fleet_time": mix.mean_fleet_time(),
            },
        )

    trace = dynamic_stages(network, gamma, [stage.to_stage() for stage in strategy.stages])
    final = trace.final
    mix = MixedRouting(
        tuple(
            (
                c.probability,
                Routing.of(
                    [f + h for f, h in zip(c.fleet_flows, c.hdv_flows, strict=True)], c.times
                ),
            )
            for c in final.components
        )
    )
    return _Market(
        utilities=final.utilities,
        verdict=final.verdict,
        share=final.share,
        mix=mix,
        details={"shares": list(trace.shares), **trace.to_dict()},
    )


def _feasibility_stage(market: _Market, counters: dict[str, int]) -> bool | None:
    if market.feasible is not None:
        counters["drivers"] = len(market.profile) if market.profile is not None else 0
        return market.feasible
    if market.plan is not None:
        counters["drivers"] = len(market.plan.driver_ids)
        ok = market.plan.check(market.profile)
        market.details["plan_residuals"] = market.plan.residuals(market.profile)
        return ok
    if market.rule is not None:
        rule = market.rule
        drivers = [(u.driver_id, u.weight) for u in market.utilities]
        profiles = [
            OfferProfile.from_offers(
                [(name, weight, routing.times[rule[name][m]]) for name, weight in drivers]
            )
            for m, (_, routing) in enumerate(market.mix.components)
        ]
        counters["components"] = len(profiles)
        return feasible_mixed(market.mix, profiles)
    return None


def _scaled_drivers(gamma: DiscountProfile, drivers: int) -> list[tuple[str, str]]:
    """``(driver_id, class name)`` for ``drivers`` drivers per unit of flow."""
    result = []
    for driver in gamma:
        count = driver.weight * drivers
        if abs(count - round(count)) > DECISION_TOL * max(1.0, count):
            raise NonIntegerFlowsError(
                f"class {driver.driver_id} has {count} drivers at scale {drivers}"
            )
        result.extend(
            (f"{driver.driver_id}-{k + 1}", driver.driver_id) for k in range(round(count))
        )
    return result


def _schedule_stage(
    config: ScenarioConfig,
    market: _Market,
    counters: dict[str, int],
) -> tuple[MultiDaySchedule | None, DaySimulation | None, str | None]:
    """Per-driver schedule, with the simulation it implies for mixed strategies."""
    scale = config.run.drivers
    if scale is None:
        return None, None, "no driver scale"
    gamma = config.population.profile
    try:
        drivers = _scaled_drivers(gamma, scale)
    except NonIntegerFlowsError as exc:
        return None, None, str(exc)
    days, seed = config.run.days, config.run.seed
    routes = market.mix.route_count

    if market.rule is not None:
        simulation = simulate_days(market.mix, days, seed)
        schedule = mixed_schedule(simulation, market.rule, drivers, routes)
        counters["drivers"] = len(drivers)
        return schedule, simulation, None

    plan = market.plan
    if plan is None:
        return None, None, "no assignment plan"
    rows = dict(zip(plan.driver_ids, plan.proportions, strict=True))
    try:
        flows = integer_flows([q * scale for q in plan.routing.flows])
    except NonIntegerFlowsError as exc:
        return None, None, str(exc)
    expanded = AssignmentPlan.from_matrix(
        [rows[name] for _, name in drivers],
        Routing.of(flows, plan.routing.times),
        driver_ids=[driver_id for driver_id, _ in drivers],
    )
    if seed is None:
        schedule = build_schedule(expanded, flows, days)
    else:
        decomposition = birkhoff_decompose(expand_to_doubly_stochastic(expanded, flows))
        schedule = sample_schedule(
            decomposition, flows, days, seed, [driver_id for driver_id, _ in drivers]
        )
    counters["drivers"] = len(drivers)
    if schedule.decomposition is not None:
        counters["terms"] = len(schedule.decomposition.terms)
    return schedule, None, None


def _risk_details(mix: MixedRouting, penalty: PenaltySpec) -> list[dict[str, Any]]:
    return [
        {"route": r + 1, **optimal_rho(distribution, penalty).to_dict()}
        for r, distribution in enumerate(mix.route_time_distributions())
    ]


# ---------------------------------------------------------------------------
# Runner
# ---------------------------------------------------------------------------


def _empty_report(config: ScenarioConfig) -> RunReport:
    return RunReport(
        success=False,
        scenario=config.name,
        strategy=config.strategy.kind.value,
        days=config.run.days,
        seed=config.run.seed,
        route_count=config.network.route_count,
        parameters=config.to_dict(),
    )


def _run_stages(config: ScenarioConfig, report: RunReport, logger: AuditLogger | None) -> None:
    """Execute the stages in order, filling ``report`` as they complete.

    Partial results stay in ``report`` when a late stage fails.
    """
    network = config.network.build(config.population.total_weight)

    with _stage(logger, "network") as counters:
        report.network = _network_stage(network)
        counters["routes"] = network.route_count

    with _stage(logger, "market") as counters:
        market = _market_stage(config, network)
        report.utilities = market.utilities
        report.verdict = market.verdict
        report.market_share = market.share
        report.offer = market.offer
        report.details = market.details
        counters["drivers"] = len(market.utilities)
        counters["defectors"] = len(market.verdict.defectors)
        counters["joiners"] = len(market.verdict.joiners)
    if logger:
        logger.verdict_reached(
            market.verdict.kind.value,
            market.share,
            nested=market.verdict.nested.value,
            offer=market.offer.value if market.offer is not None else None,
        )

    with _stage(logger, "feasibility") as counters:
        report.feasible = _feasibility_stage(market, counters)

    with _stage(logger, "schedule") as counters:
        schedule, simulation, skipped = _schedule_stage(config, market, counters)
        report.schedule = schedule
        if skipped is not None:
            report.details["schedule_skipped"] = skipped

    with _stage(logger, "simulation") as counters:
        if simulation is None:
            simulation = simulate_days(market.mix, config.run.days, config.run.seed)
        report.simulation = simulation
        report.details["component_days"] = list(
            simulation.component_counts(len(market.mix.components))
        )
        penalty = config.population.penalty
        if penalty is not None:
            report.details["risk"] = _risk_details(market.mix, penalty)
        counters["days"] = simulation.day_count

    report.success = True
    output_dir = config.run.output_dir
    with _stage(logger, "report") as counters:
        if output_dir is not None:
            for name, (path, rows) in emit_csv(report, output_dir).items():
                report.output_files[name] = str(path)
                if logger:
                    logger.artifact_written(path, output_dir, record_count=rows)
        counters["artifacts"] = len(report.output_files)


def run_scenario(
    config: ScenarioConfig,
    logger: AuditLogger | None = None,
    *,
    raise_errors: bool = False,
    command: list[str] | None = None,
) -> RunReport:
    """Run a scenario end to end.

    The result is deterministic for a given configuration: without a seed
    days follow the quota sequence, with a seed they are drawn from
    ``numpy.random.default_rng(seed)``.

    Parameters
    ----------
    config : ScenarioConfig
        Validated scenario.
    logger : AuditLogger | None, optional
        Audit logger; None disables audit events.
    raise_errors : bool, optional
        Re-raise stage failures instead of returning a failed report.
    command : list[str] | None, optional
        Command line recorded in the ``run_started`` event.

    Returns
    -------
    RunReport
        Results; ``success`` is False and ``error_message`` set on failure.

    Examples
    --------
    Run a bundled scenario and write its artifacts:

        >>> from pathlib import Path
        >>> from fleetshare.engine import load_scenario, run_scenario
        >>> config = load_scenario("scenarios/mixed_routing.toml")
        >>> report = run_scenario(config.with_overrides(output_dir=Path("out")))
        >>> report.verdict.kind
        <VerdictKind.DFHE: 'DFHE'>
    """
    start = time.perf_counter()
    report = _empty_report(config)
    if logger:
        logger.run_started(command or [], config.to_dict())
    try:
        _run_stages(config, report, logger)
    except Exception as e:
        report.success = False
        report.error_message = f"{type(e).__name__}: {e}"
        if logger:
            logger.error(type(e).__name__, str(e), traceback=traceback.format_exc())
            logger.run_finished("failed", time.perf_counter() - start)
        if raise_errors:
            raise
        return report
    if logger:
        logger.run_finished("success", time.perf_counter() - start)
    return report
