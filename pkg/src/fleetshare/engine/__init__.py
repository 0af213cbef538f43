"""Scenario engine: configuration, runner, simulation and report artifacts."""

from fleetshare.engine.config import (
    ComponentSpec,
    NetworkSpec,
    PopulationSpec,
    RunParameters,
    ScenarioConfig,
    StageSpec,
    StrategyKind,
    StrategySpec,
    load_scenario,
    parse_strategy,
)
from fleetshare.engine.report import ARTIFACT_NAMES, RunReport, emit_csv
from fleetshare.engine.runner import STAGES, run_scenario
from fleetshare.engine.simulation import (
    DaySimulation,
    mixed_schedule,
    simulate_days,
    time_histogram,
)

__all__ = [
    "ARTIFACT_NAMES",
    "STAGES",
    "ComponentSpec",
    "DaySimulation",
    "NetworkSpec",
    "PopulationSpec",
    "RunParameters",
    "RunReport",
    "ScenarioConfig",
    "StageSpec",
    "StrategyKind",
    "StrategySpec",
    "emit_csv",
    "load_scenario",
    "mixed_schedule",
    "parse_strategy",
    "run_scenario",
    "simulate_days",
    "time_histogram",
]
