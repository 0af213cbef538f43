"""Tests for the scenario runner, day simulation and report artifacts."""

from collections.abc import Callable
from pathlib import Path
from typing import Any

import numpy as np
import pytest

import fleetshare.engine.runner as runner_module
from fleetshare.engine import (
    ARTIFACT_NAMES,
    STAGES,
    RunReport,
    ScenarioConfig,
    emit_csv,
    load_scenario,
    mixed_schedule,
    run_scenario,
    simulate_days,
    time_histogram,
)
from fleetshare.engine.report import normalize_numbers
from fleetshare.feasibility import MixedRouting, Routing
from fleetshare.market import EquilibriumVerdict, NestedVerdict, OfferVerdict, VerdictKind


@pytest.fixture
def alternating_mix() -> MixedRouting:
    """90 % of the fleet on either route with equal probability."""
    return MixedRouting(
        (
            (0.5, Routing.of([0.9, 0.1], [1.9, 1.1])),
            (0.5, Routing.of([0.1, 0.9], [1.1, 1.9])),
        )
    )


@pytest.fixture
def load(bundled_scenario: Callable[[str], Path]) -> Callable[..., ScenarioConfig]:
    """Load a bundled scenario with optional overrides."""

    def _factory(name: str, **overrides: Any) -> ScenarioConfig:
        return load_scenario(bundled_scenario(name)).with_overrides(**overrides)

    return _factory


# ---------------------------------------------------------------------------
# Day simulation
# ---------------------------------------------------------------------------


@pytest.mark.unit
def test_simulate_days_deterministic(alternating_mix: MixedRouting) -> None:
    """Test that quota sequencing splits the days exactly."""
    simulation = simulate_days(alternating_mix, 10_000)

    assert simulation.day_count == 10_000
    assert simulation.component_counts(2) == (5000, 5000)
    assert simulation.components[:4] == (0, 1, 0, 1)
    np.testing.assert_allclose(simulation.times[0], [1.9, 1.1])
    np.testing.assert_allclose(simulation.times.mean(axis=0), [1.5, 1.5])


@pytest.mark.unit
def test_simulate_days_seeded(alternating_mix: MixedRouting) -> None:
    """Test reproducible i.i.d. draws."""
    first = simulate_days(alternating_mix, 500, seed=11)
    second = simulate_days(alternating_mix, 500, seed=11)

    assert first.components == second.components
    assert sum(first.component_counts(2)) == 500
    assert 150 < first.component_counts(2)[0] < 350
    with pytest.raises(ValueError, match="days"):
        simulate_days(alternating_mix, 0)


@pytest.mark.unit
def test_time_histogram_merges_printed_values() -> None:
    """Test that times equal at report precision share a bin."""
    times = np.array([[1.1, 1.9], [1.9, 1.1], [1.1 + 1e-15, 1.9]])

    bins, counts = time_histogram(times)

    assert bins == (1.1, 1.9)
    assert counts.tolist() == [[2, 1], [1, 2]]


@pytest.mark.unit
def test_mixed_schedule_follows_rule(alternating_mix: MixedRouting) -> None:
    """Test per-driver routes under a component rule."""
    simulation = simulate_days(alternating_mix, 4)
    rule = {"fan": (0, 1), "skeptic": (1, 0)}
    drivers = [("fan-1", "fan"), ("fan-2", "fan"), ("skeptic-1", "skeptic")]

    schedule = mixed_schedule(simulation, rule, drivers, 2)

    assert schedule.driver_ids == ("fan-1", "fan-2", "skeptic-1")
    assert schedule.daily_flows() == [(2, 1), (1, 2), (2, 1), (1, 2)]
    assert schedule.to_rows()[2] == ["skeptic-1", 2, 1, 2, 1]


# ---------------------------------------------------------------------------
# Report helpers
# ---------------------------------------------------------------------------


@pytest.mark.unit
def test_normalize_numbers() -> None:
    """Test rounding of nested floats to the report precision."""
    data = {"t": [1.4300000000000002, 2], "ok": True, "n": None, "x": np.float64(1 / 3)}

    assert normalize_numbers(data) == {"t": [1.43, 2], "ok": True, "n": None, "x": 0.333333333333}
    assert normalize_numbers((np.int64(3),)) == [3]


@pytest.mark.unit
@pytest.mark.parametrize(
    ("changes", "expected"),
    [
        ({}, True),
        ({"success": False}, False),
        ({"verdict": EquilibriumVerdict(VerdictKind.NOT_EQUILIBRIUM, ("a",))}, False),
        ({"offer": OfferVerdict.NO}, False),
        ({"feasible": False}, False),
        ({"verdict": None}, False),
    ],
)
def test_report_accepted(changes: dict[str, Any], expected: bool) -> None:
    """Test the acceptance rule of a report."""
    fields: dict[str, Any] = {
        "success": True,
        "scenario": "s",
        "strategy": "offer",
        "verdict": EquilibriumVerdict(VerdictKind.DFHE),
        "offer": OfferVerdict.YES,
        "feasible": True,
    }
    fields.update(changes)

    assert RunReport(**fields).accepted is expected


@pytest.mark.unit
def test_empty_report_artifacts(tmp_path: Path) -> None:
    """Test that a report without results still writes its fixed columns."""
    report = RunReport(success=False, scenario="s", strategy="none", route_count=2)

    written = emit_csv(report, tmp_path / "out")

    assert list(written) == ["utilities.csv", "timeseries.csv", "histogram.csv", "summary.json"]
    assert (tmp_path / "out" / "timeseries.csv").read_text() == "day,route_1,route_2\n"
    assert written["utilities.csv"][1] == 0
    with pytest.raises(KeyError):
        report.utility_of("nobody")


# ---------------------------------------------------------------------------
# Scenario runs
# ---------------------------------------------------------------------------


@pytest.mark.unit
def test_run_hdv_only(load: Callable[..., ScenarioConfig]) -> None:
    """Test the own-car Wardrop equilibrium without a fleet."""
    report = run_scenario(load("hdv_only"))

    assert report.success
    assert report.network["wardrop"]["flows"] == pytest.approx([2 / 3, 1 / 3])
    assert report.network["wardrop"]["times"] == pytest.approx([7 / 3, 7 / 3])
    assert report.market_share == 0.0
    assert report.verdict is not None
    assert report.verdict.kind is VerdictKind.DFHE
    assert report.verdict.nested is NestedVerdict.NFHE
    assert report.feasible is None
    assert report.schedule is None
    assert report.details["schedule_skipped"] == "no driver scale"
    assert report.details["component_days"] == [100]


@pytest.mark.unit
def test_run_symmetric_offer(load: Callable[..., ScenarioConfig]) -> None:
    """Test the system optimum with equal mean-time offers."""
    report = run_scenario(load("symmetric_offer"))
    pair = report.utility_of("all")

    assert report.network["system_optimum"]["flows"] == pytest.approx([0.5, 0.5])
    assert report.network["system_optimum"]["times"] == pytest.approx([2.0, 2.5])
    assert report.network["symmetric_acceptance_bound"] == pytest.approx(8 / 9)
    assert (pair.u_cav, pair.u_hdv) == (pytest.approx(0.85 * 2.25), pytest.approx(2.0))
    assert report.offer is OfferVerdict.YES
    assert report.feasible is True
    assert report.accepted
    assert report.schedule is not None
    assert report.schedule.driver_ids == ("all-1", "all-2")
    assert all(flows == (1, 1) for flows in report.schedule.daily_flows())


@pytest.mark.unit
def test_run_symmetric_offer_rejected(load: Callable[..., ScenarioConfig]) -> None:
    """Test that drivers above the acceptance bound defect."""
    routes = [route.to_dict() for route in load("symmetric_offer").network.routes]
    config = ScenarioConfig.from_dict(
        {
            "scenario": {"days": 5},
            "network": {"routes": routes},
            "population": {"classes": [{"name": "all", "gamma": 0.95, "weight": 1.0}]},
            "strategy": {"kind": "system_optimum"},
        }
    )

    report = run_scenario(config)

    assert report.success
    assert report.offer is OfferVerdict.NO
    assert report.verdict is not None
    assert report.verdict.defectors == ("all",)
    assert not report.accepted


@pytest.mark.unit
def test_run_tailored_offer(load: Callable[..., ScenarioConfig]) -> None:
    """Test that each class gets its own route."""
    report = run_scenario(load("tailored_offer"))

    assert report.offer is OfferVerdict.YES
    assert report.feasible is True
    assert report.accepted
    assert report.utility_of("indifferent").u_cav == pytest.approx(2.0)
    assert report.utility_of("keen").u_cav == pytest.approx(2.0)
    assert report.schedule is not None
    rows = report.schedule.to_rows()
    assert rows[0] == ["indifferent-1", *([1] * 10)]
    assert rows[1] == ["keen-1", *([2] * 10)]


@pytest.mark.unit
def test_run_mixed_routing(load: Callable[..., ScenarioConfig]) -> None:
    """Test the randomized split that keeps the reluctant class."""
    report = run_scenario(load("mixed_routing"))

    assert report.verdict is not None
    assert report.verdict.kind is VerdictKind.DFHE
    assert report.utility_of("enthusiastic").u_cav == pytest.approx(1.33)
    assert report.utility_of("reluctant").u_cav == pytest.approx(1.43)
    assert report.utility_of("reluctant").u_hdv == pytest.approx(1.5)
    assert report.feasible is True
    assert report.details["component_days"] == [5000, 5000]
    assert report.details["expected_times"] == pytest.approx([1.5, 1.5])
    bins, counts = report.histogram()
    assert bins == (1.1, 1.9)
    assert counts.tolist() == [[5000, 5000], [5000, 5000]]
    assert report.schedule is not None
    assert len(report.schedule.driver_ids) == 10
    assert set(report.schedule.daily_flows()) == {(9, 1), (1, 9)}


@pytest.mark.unit
def test_run_risk_two_point(load: Callable[..., ScenarioConfig]) -> None:
    """Test that schedule-delay risk raises the own-car disutility."""
    report = run_scenario(load("risk_two_point", days=100))

    assert report.utility_of("enthusiastic").u_hdv == pytest.approx(1.9)
    assert report.verdict is not None
    assert report.verdict.kind is VerdictKind.DFHE
    risk = report.details["risk"]
    assert [entry["route"] for entry in risk] == [1, 2]
    assert risk[0]["rho"] == pytest.approx(1.9)
    assert risk[0]["risk"] == pytest.approx(0.4)


@pytest.mark.unit
def test_run_dynamic_stages(load: Callable[..., ScenarioConfig]) -> None:
    """Test the market-entry trace up to full share."""
    report = run_scenario(load("dynamic_stages", days=10))

    assert report.details["shares"] == pytest.approx([0.0, 0.9, 0.9, 1.0])
    assert report.market_share == pytest.approx(1.0)
    assert report.verdict is not None
    assert report.verdict.kind is VerdictKind.DFHE
    assert report.verdict.nested is NestedVerdict.NFHE
    assert report.utility_of("enthusiastic").u_cav == pytest.approx(1.33)
    assert report.utility_of("reluctant").u_cav == pytest.approx(1.43)
    assert len(report.details["stages"]) == 4


@pytest.mark.unit
def test_run_seeded_is_reproducible(load: Callable[..., ScenarioConfig]) -> None:
    """Test that a seed fixes the sampled days."""
    first = run_scenario(load("mixed_routing", days=200, seed=5))
    second = run_scenario(load("mixed_routing", days=200, seed=5))

    assert first.seed == 5
    np.testing.assert_array_equal(first.timeseries, second.timeseries)
    assert sum(first.details["component_days"]) == 200


@pytest.mark.unit
def test_run_failure_returns_partial_report(
    load: Callable[..., ScenarioConfig], monkeypatch: pytest.MonkeyPatch
) -> None:
    """Test that a stage failure yields a failed report or re-raises."""

    def _boom(*args: Any, **kwargs: Any) -> None:
        raise RuntimeError("boom")

    monkeypatch.setattr(runner_module, "_feasibility_stage", _boom)
    config = load("symmetric_offer")

    report = run_scenario(config)

    assert not report.success
    assert report.error_message == "RuntimeError: boom"
    assert report.offer is OfferVerdict.YES
    assert not report.accepted
    with pytest.raises(RuntimeError, match="boom"):
        run_scenario(config, raise_errors=True)


@pytest.mark.unit
def test_stage_names() -> None:
    """Test the stage order."""
    assert STAGES == ("network", "market", "feasibility", "schedule", "simulation", "report")


# ---------------------------------------------------------------------------
# Artifacts
# ---------------------------------------------------------------------------


@pytest.mark.unit
def test_artifacts_content(load: Callable[..., ScenarioConfig], tmp_path: Path) -> None:
    """Test the exact text of the small artifacts."""
    report = run_scenario(load("mixed_routing", days=100, output_dir=tmp_path))

    assert set(report.output_files) == set(ARTIFACT_NAMES)
    assert (tmp_path / "utilities.csv").read_text(encoding="utf-8") == (
        "driver_id,gamma,weight,mode,u_cav,u_hdv\n"
        "enthusiastic,0.7,0.9,cav,1.33,1.5\n"
        "reluctant,1.3,0.1,cav,1.43,1.5\n"
    )
    assert (tmp_path / "histogram.csv").read_text(encoding="utf-8") == (
        "route,1.1,1.9\n1,50,50\n2,50,50\n"
    )
    timeseries = (tmp_path / "timeseries.csv").read_text(encoding="utf-8").splitlines()
    assert timeseries[:3] == ["day,route_1,route_2", "1,1.9,1.1", "2,1.1,1.9"]
    assert len(timeseries) == 101
    schedule = (tmp_path / "schedule.csv").read_text(encoding="utf-8").splitlines()
    assert schedule[0].startswith("driver_id,day_1,day_2,")
    assert schedule[1].startswith("enthusiastic-1,1,2,1,2")
    assert schedule[10].startswith("reluctant-1,2,1,2,1")


@pytest.mark.unit
def test_artifacts_are_byte_stable(load: Callable[..., ScenarioConfig], tmp_path: Path) -> None:
    """Test that two runs of the same scenario write identical bytes."""
    first = run_scenario(load("dynamic_stages", days=50, output_dir=tmp_path / "a"))
    second = run_scenario(load("dynamic_stages", days=50, output_dir=tmp_path / "b"))

    assert first.success and second.success
    assert "schedule.csv" not in first.output_files
    for name in first.output_files:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    summary = (tmp_path / "a" / "summary.json").read_text(encoding="utf-8")
    assert summary.endswith("}\n")
    assert "timestamp" not in summary


@pytest.mark.unit
def test_rerun_without_schedule_removes_stale_file(
    load: Callable[..., ScenarioConfig], tmp_path: Path
) -> None:
    """Test that a run without a schedule clears one left by an earlier run."""
    run_scenario(load("mixed_routing", days=20, output_dir=tmp_path))
    assert (tmp_path / "schedule.csv").exists()

    report = run_scenario(load("dynamic_stages", days=20, output_dir=tmp_path))

    assert report.success
    assert "schedule.csv" not in report.output_files
    assert not (tmp_path / "schedule.csv").exists()
