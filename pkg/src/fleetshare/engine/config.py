"""Scenario configuration loaded from TOML.

A scenario document has four parts: ``[scenario]`` run parameters, the
``[network]`` routes, the ``[population]`` of driver classes and the fleet
``[strategy]``. Route indices in documents are 1-based; every dataclass
here stores them 0-based.
"""

from __future__ import annotations

import tomllib
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field, replace
from enum import StrEnum
from pathlib import Path
from typing import Any

from fleetshare.errors import ConfigError
from fleetshare.market.models import DiscountProfile, DriverAttitude
from fleetshare.market.stages import MimicHDV, Stage, StackelbergMix, StageKind, TailoredOffer
from fleetshare.measures.discrete import MASS_TOL
from fleetshare.network.delays import DelayFunction, delay_from_dict
from fleetshare.network.models import Network
from fleetshare.risk.models import PenaltySpec

__all__ = [
    "ComponentSpec",
    "NetworkSpec",
    "PopulationSpec",
    "RunParameters",
    "ScenarioConfig",
    "StageSpec",
    "StrategyKind",
    "StrategySpec",
    "load_scenario",
    "parse_strategy",
]

DEFAULT_DAYS = 1000


class StrategyKind(StrEnum):
    """Fleet strategy of a scenario."""

    NONE = "none"
    WARDROP = "wardrop"
    SYSTEM_OPTIMUM = "system_optimum"
    DETERMINISTIC = "deterministic"
    MIXED = "mixed"
    STAGES = "stages"
    OFFER = "offer"


# ---------------------------------------------------------------------------
# Sections
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NetworkSpec:
    """Routes of the network; demand defaults to the population weight.

    Attributes
    ----------
    routes : tuple[DelayFunction, ...]
        Delay function per route.
    demand : float | None
        Declared demand, checked against the population when given.
    """

    routes: tuple[DelayFunction, ...]
    demand: float | None = None

    def __post_init__(self) -> None:
        """Validate routes."""
        if not self.routes:
            raise ConfigError("at least one route is required", "network.routes")
        if self.demand is not None and self.demand < 0:
            raise ConfigError(f"demand must be >= 0, got {self.demand}", "network.demand")

    @property
    def route_count(self) -> int:
        """Number of routes."""
        return len(self.routes)

    def build(self, demand: float) -> Network:
        """Network carrying ``demand``."""
        return Network(routes=self.routes, demand=demand)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {"demand": self.demand, "routes": [route.to_dict() for route in self.routes]}


@dataclass(frozen=True)
class PopulationSpec:
    """Driver classes and optional schedule-delay penalties.

    Attributes
    ----------
    classes : tuple[DriverAttitude, ...]
        One entry per class; names are unique and weights positive.
    theta_lap : float | None
        Late-arrival value of time.
    theta_eap : float | None
        Early-arrival value of time.
    """

    classes: tuple[DriverAttitude, ...]
    theta_lap: float | None = None
    theta_eap: float | None = None

    def __post_init__(self) -> None:
        """Validate classes and penalties."""
        if not self.classes:
            raise ConfigError("at least one class is required", "population.classes")
        seen: set[str] = set()
        for index, driver in enumerate(self.classes):
            if driver.driver_id in seen:
                raise ConfigError(
                    f"duplicate class name {driver.driver_id!r}",
                    f"population.classes[{index}].name",
                )
            seen.add(driver.driver_id)
            if driver.weight <= 0:
                raise ConfigError(
                    f"weight must be > 0, got {driver.weight}",
                    f"population.classes[{index}].weight",
                )
        if (self.theta_lap is None) != (self.theta_eap is None):
            raise ConfigError("theta_lap and theta_eap must be given together", "population")

    @property
    def profile(self) -> DiscountProfile:
        """Classes as a discount profile."""
        return DiscountProfile(self.classes)

    @property
    def total_weight(self) -> float:
        """Sum of class weights."""
        return sum(driver.weight for driver in self.classes)

    @property
    def penalty(self) -> PenaltySpec | None:
        """Penalty specification, if both values are set."""
        if self.theta_lap is None or self.theta_eap is None:
            return None
        return PenaltySpec(self.theta_lap, self.theta_eap)

    @property
    def names(self) -> tuple[str, ...]:
        """Class names in document order."""
        return tuple(driver.driver_id for driver in self.classes)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {
            "classes": [driver.to_dict() for driver in self.classes],
            "theta_lap": self.theta_lap,
            "theta_eap": self.theta_eap,
        }


@dataclass(frozen=True)
class ComponentSpec:
    """One routing component: probability and absolute fleet flows."""

    probability: float
    flows: tuple[float, ...]

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {"probability": self.probability, "flows": list(self.flows)}


@dataclass(frozen=True)
class StageSpec:
    """One step of a staged market entry.

    Attributes
    ----------
    kind : StageKind
        ``mimic_hdv``, ``stackelberg_mix`` or ``tailored_offer``.
    components : tuple[ComponentSpec, ...]
        Components of a Stackelberg stage.
    bound : float | None
        Offered time bound of a tailored-offer stage.
    """

    kind: StageKind
    components: tuple[ComponentSpec, ...] = ()
    bound: float | None = None

    def to_stage(self) -> Stage:
        """Build the stage object consumed by :func:`dynamic_stages`."""
        if self.kind is StageKind.MIMIC_HDV:
            return MimicHDV()
        if self.kind is StageKind.STACKELBERG_MIX:
            return StackelbergMix(tuple((c.probability, c.flows) for c in self.components))
        if self.bound is None:
            raise ConfigError("tailored_offer stage needs a bound", "strategy.stages")
        return TailoredOffer(self.bound)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        data: dict[str, Any] = {"kind": self.kind.value}
        if self.components:
            data["components"] = [c.to_dict() for c in self.components]
        if self.bound is not None:
            data["bound"] = self.bound
        return data


@dataclass(frozen=True)
class StrategySpec:
    """Fleet strategy.

    Attributes
    ----------
    kind : StrategyKind
        Strategy family.
    flows : tuple[float, ...]
        Fleet flows of ``deterministic`` and ``offer`` strategies.
    components : tuple[ComponentSpec, ...]
        Components of a ``mixed`` strategy.
    assignment : tuple[tuple[str, tuple[int, ...]], ...]
        0-based route per component for every class of a ``mixed`` strategy.
    stages : tuple[StageSpec, ...]
        Steps of a ``stages`` strategy.
    offers : tuple[tuple[str, float], ...]
        ``(class name, offered time)`` of an ``offer`` strategy.
    """

    kind: StrategyKind = StrategyKind.NONE
    flows: tuple[float, ...] = ()
    components: tuple[ComponentSpec, ...] = ()
    assignment: tuple[tuple[str, tuple[int, ...]], ...] = ()
    stages: tuple[StageSpec, ...] = ()
    offers: tuple[tuple[str, float], ...] = ()

    def __post_init__(self) -> None:
        """Validate the fields each kind needs."""
        if self.kind in (StrategyKind.DETERMINISTIC, StrategyKind.OFFER) and not self.flows:
            raise ConfigError(f"{self.kind} strategy needs flows", "strategy.flows")
        if self.kind is StrategyKind.MIXED:
            if not self.components:
                raise ConfigError("mixed strategy needs components", "strategy.components")
            total = sum(c.probability for c in self.components)
            if abs(total - 1.0) > MASS_TOL:
                raise ConfigError(
                    f"component probabilities must sum to 1, got {total}", "strategy.components"
                )
        if self.kind is StrategyKind.STAGES and not self.stages:
            raise ConfigError("stages strategy needs at least one stage", "strategy.stages")
        if self.kind is StrategyKind.OFFER and not self.offers:
            raise ConfigError("offer strategy needs offers", "strategy.offers")

    @property
    def rule(self) -> dict[str, tuple[int, ...]]:
        """Assignment as a mapping from class name to routes."""
        return dict(self.assignment)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary with 1-based routes."""
        return {
            "kind": self.kind.value,
            "flows": list(self.flows),
            "components": [c.to_dict() for c in self.components],
            "assignment": {name: [r + 1 for r in routes] for name, routes in self.assignment},
            "stages": [stage.to_dict() for stage in self.stages],
            "offers": [{"driver_id": name, "offer": offer} for name, offer in self.offers],
        }


@dataclass(frozen=True)
class RunParameters:
    """Run-level settings.

    Attributes
    ----------
    name : str
        Scenario name.
    days : int
        Number of simulated days J.
    drivers : int | None
        Drivers per unit of flow for the per-driver schedule; None skips it.
    seed : int | None
        Seed for i.i.d. sampling; None selects deterministic sequencing.
    output_dir : Path | None
        Directory for the report artifacts.
    """

    name: str = "scenario"
    days: int = DEFAULT_DAYS
    drivers: int | None = None
    seed: int | None = None
    output_dir: Path | None = None

    def __post_init__(self) -> None:
        """Validate counts."""
        if self.days < 1:
            raise ConfigError(f"days must be >= 1, got {self.days}", "scenario.days")
        if self.drivers is not None and self.drivers < 1:
            raise ConfigError(f"drivers must be >= 1, got {self.drivers}", "scenario.drivers")

    @property
    def sampled(self) -> bool:
        """Whether days are drawn at random."""
        return self.seed is not None

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary; the output directory is not part of the snapshot."""
        return {
            "name": self.name,
            "days": self.days,
            "drivers": self.drivers,
            "seed": self.seed,
            "sampled": self.sampled,
        }


@dataclass(frozen=True)
class ScenarioConfig:
    """Complete scenario.

    Attributes
    ----------
    network : NetworkSpec
        Routes.
    population : PopulationSpec
        Driver classes.
    strategy : StrategySpec
        Fleet strategy.
    run : RunParameters
        Days, seed and output location.
    source : str | None
        File the config was read from.
    """

    network: NetworkSpec
    population: PopulationSpec
    strategy: StrategySpec = field(default_factory=StrategySpec)
    run: RunParameters = field(default_factory=RunParameters)
    source: str | None = None

    def __post_init__(self) -> None:
        """Check that references between sections resolve."""
        routes = self.network.route_count
        demand = self.population.total_weight
        if self.network.demand is not None and abs(self.network.demand - demand) > 1e-9:
            raise ConfigError(
                f"demand {self.network.demand} differs from population weight {demand}",
                "network.demand",
            )
        strategy = self.strategy
        if strategy.flows:
            _check_flows(strategy.flows, routes, demand, "strategy.flows")
        for index, component in enumerate(strategy.components):
            _check_flows(component.flows, routes, demand, f"strategy.components[{index}].flows")
        if strategy.kind is StrategyKind.MIXED:
            self._check_assignment()
        for index, stage in enumerate(strategy.stages):
            for k, component in enumerate(stage.components):
                path = f"strategy.stages[{index}].components[{k}].flows"
                if len(component.flows) != routes:
                    raise ConfigError(f"expected {routes} flows, got {len(component.flows)}", path)
        names = set(self.population.names)
        for index, (name, _) in enumerate(strategy.offers):
            if name not in names:
                raise ConfigError(
                    f"unknown class {name!r}", f"strategy.offers[{index}].driver_id"
                )
        if strategy.kind is StrategyKind.OFFER and len(strategy.offers) != len(names):
            raise ConfigError("every population class needs exactly one offer", "strategy.offers")

    def _check_assignment(self) -> None:
        rule = self.strategy.rule
        components = len(self.strategy.components)
        for name in self.population.names:
            routes = rule.get(name)
            if routes is None:
                raise ConfigError(f"no routes for class {name!r}", "strategy.assignment")
            if len(routes) != components:
                raise ConfigError(
                    f"expected {components} routes, got {len(routes)}",
                    f"strategy.assignment.{name}",
                )
            for route in routes:
                if not 0 <= route < self.network.route_count:
                    raise ConfigError(
                        f"route {route + 1} out of range", f"strategy.assignment.{name}"
                    )
        for name in rule:
            if name not in self.population.names:
                raise ConfigError(f"unknown class {name!r}", f"strategy.assignment.{name}")

    @property
    def name(self) -> str:
        """Scenario name."""
        return self.run.name

    def with_overrides(
        self,
        *,
        days: int | None = None,
        seed: int | None = None,
        output_dir: Path | None = None,
    ) -> ScenarioConfig:
        """Return a copy with command-line overrides applied."""
        run = self.run
        if days is not None:
            run = replace(run, days=days)
        if seed is not None:
            run = replace(run, seed=seed)
        if output_dir is not None:
            run = replace(run, output_dir=output_dir)
        return replace(self, run=run)

    def to_dict(self) -> dict[str, Any]:
        """Parameter snapshot for the audit log and the summary."""
        return {
            "scenario": self.run.to_dict(),
            "network": self.network.to_dict(),
            "population": self.population.to_dict(),
            "strategy": self.strategy.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], source: str | None = None) -> ScenarioConfig:
        """Parse a scenario document.

        Raises
        ------
        ConfigError
            With the dotted path of the first offending field.
        """
        return cls(
            network=_parse_network(_section(data, "network", required=True)),
            population=_parse_population(_section(data, "population", required=True)),
            strategy=parse_strategy(_section(data, "strategy")),
            run=_parse_run(_section(data, "scenario")),
            source=source,
        )


def load_scenario(path: Path | str) -> ScenarioConfig:
    """Read a scenario TOML file.

    Parameters
    ----------
    path : Path | str
        TOML document.

    Returns
    -------
    ScenarioConfig
        Validated configuration.

    Raises
    ------
    ConfigError
        If the file is not valid TOML or a field is invalid.
    FileNotFoundError
        If the file does not exist.
    """
    path = Path(path)
    with path.open("rb") as f:
        try:
            data = tomllib.load(f)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"invalid TOML in {path.name}: {exc}") from exc
    config = ScenarioConfig.from_dict(data, source=str(path))
    if "name" not in data.get("scenario", {}):
        config = replace(config, run=replace(config.run, name=path.stem))
    return config


# ---------------------------------------------------------------------------
# Parsing helpers
# ---------------------------------------------------------------------------


def _section(data: Mapping[str, Any], key: str, *, required: bool = False) -> Mapping[str, Any]:
    value = data.get(key)
    if value is None:
        if required:
            raise ConfigError("section is required", key)
        return {}
    if not isinstance(value, Mapping):
        raise ConfigError("expected a table", key)
    return value


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, int | float):
        raise ConfigError(f"expected a number, got {value!r}", path)
    return float(value)


def _integer(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"expected an integer, got {value!r}", path)
    return value


def _numbers(value: Any, path: str) -> tuple[float, ...]:
    if not isinstance(value, Sequence) or isinstance(value, str):
        raise ConfigError("expected a list of numbers", path)
    return tuple(_number(v, f"{path}[{i}]") for i, v in enumerate(value))


def _tables(data: Mapping[str, Any], key: str, path: str) -> list[Mapping[str, Any]]:
    value = data.get(key, [])
    if not isinstance(value, list) or not all(isinstance(v, Mapping) for v in value):
        raise ConfigError("expected an array of tables", path)
    return value


def _check_flows(flows: Sequence[float], routes: int, demand: float, path: str) -> None:
    if len(flows) != routes:
        raise ConfigError(f"expected {routes} flows, got {len(flows)}", path)
    if any(q < 0 for q in flows):
        raise ConfigError("flows must be >= 0", path)
    if abs(sum(flows) - demand) > 1e-9 * max(1.0, demand):
        raise ConfigError(f"flows sum to {sum(flows)}, population weight is {demand}", path)


def _parse_network(data: Mapping[str, Any]) -> NetworkSpec:
    routes = tuple(
        delay_from_dict(spec, f"network.routes[{i}]")
        for i, spec in enumerate(_tables(data, "routes", "network.routes"))
    )
    demand = data.get("demand")
    return NetworkSpec(
        routes=routes,
        demand=None if demand is None else _number(demand, "network.demand"),
    )


def _parse_population(data: Mapping[str, Any]) -> PopulationSpec:
    classes = []
    for i, spec in enumerate(_tables(data, "classes", "population.classes")):
        path = f"population.classes[{i}]"
        if "name" not in spec:
            raise ConfigError("missing name", f"{path}.name")
        for key in ("gamma", "weight"):
            if key not in spec:
                raise ConfigError(f"missing {key}", f"{path}.{key}")
        try:
            classes.append(
                DriverAttitude(
                    driver_id=str(spec["name"]),
                    weight=_number(spec["weight"], f"{path}.weight"),
                    gamma=_number(spec["gamma"], f"{path}.gamma"),
                    beta=_number(spec.get("beta", 1.0), f"{path}.beta"),
                    u_cav0=_number(spec.get("u_cav0", 0.0), f"{path}.u_cav0"),
                    u_hdv0=_number(spec.get("u_hdv0", 0.0), f"{path}.u_hdv0"),
                    epsilon=_numbers(spec.get("epsilon", []), f"{path}.epsilon"),
                )
            )
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(str(exc), path) from exc

    theta_lap = data.get("theta_lap")
    theta_eap = data.get("theta_eap")
    population = PopulationSpec(
        classes=tuple(classes),
        theta_lap=None if theta_lap is None else _number(theta_lap, "population.theta_lap"),
        theta_eap=None if theta_eap is None else _number(theta_eap, "population.theta_eap"),
    )
    try:
        _ = population.penalty
    except ValueError as exc:
        raise ConfigError(str(exc), "population") from exc
    return population


def _parse_components(data: Mapping[str, Any], path: str) -> tuple[ComponentSpec, ...]:
    components = []
    for i, spec in enumerate(_tables(data, "components", path)):
        item = f"{path}[{i}]"
        probability = _number(spec.get("probability"), f"{item}.probability")
        if probability < 0:
            raise ConfigError(f"probability must be >= 0, got {probability}", f"{item}.probability")
        components.append(ComponentSpec(probability, _numbers(spec.get("flows"), f"{item}.flows")))
    return tuple(components)


def _parse_stage(spec: Mapping[str, Any], path: str) -> StageSpec:
    try:
        kind = StageKind(spec.get("kind"))
    except ValueError as exc:
        raise ConfigError(f"unknown stage kind {spec.get('kind')!r}", f"{path}.kind") from exc
    if kind is StageKind.WARDROP:
        raise ConfigError("the Wardrop state is always stage 0", f"{path}.kind")
    bound = spec.get("bound")
    stage = StageSpec(
        kind=kind,
        components=_parse_components(spec, f"{path}.components"),
        bound=None if bound is None else _number(bound, f"{path}.bound"),
    )
    try:
        stage.to_stage()
    except ValueError as exc:
        raise ConfigError(str(exc), path) from exc
    return stage


def parse_strategy(data: Mapping[str, Any]) -> StrategySpec:
    """Parse a strategy table; field paths start with ``strategy``."""
    try:
        kind = StrategyKind(data.get("kind", StrategyKind.NONE.value))
    except ValueError as exc:
        available = ", ".join(k.value for k in StrategyKind)
        raise ConfigError(
            f"unknown strategy kind {data.get('kind')!r}; available: {available}", "strategy.kind"
        ) from exc

    assignment_data = data.get("assignment", {})
    if not isinstance(assignment_data, Mapping):
        raise ConfigError("expected a table", "strategy.assignment")
    assignment = []
    for name, routes in assignment_data.items():
        path = f"strategy.assignment.{name}"
        if not isinstance(routes, list):
            raise ConfigError("expected a list of route numbers", path)
        assignment.append((str(name), tuple(_integer(r, path) - 1 for r in routes)))

    offers = []
    for i, spec in enumerate(_tables(data, "offers", "strategy.offers")):
        path = f"strategy.offers[{i}]"
        if "driver_id" not in spec:
            raise ConfigError("missing driver_id", f"{path}.driver_id")
        offers.append((str(spec["driver_id"]), _number(spec.get("offer"), f"{path}.offer")))

    return StrategySpec(
        kind=kind,
        flows=_numbers(data["flows"], "strategy.flows") if "flows" in data else (),
        components=_parse_components(data, "strategy.components"),
        assignment=tuple(assignment),
        stages=tuple(
            _parse_stage(spec, f"strategy.stages[{i}]")
            for i, spec in enumerate(_tables(data, "stages", "strategy.stages"))
        ),
        offers=tuple(offers),
    )


def _parse_run(data: Mapping[str, Any]) -> RunParameters:
    seed = data.get("seed")
    if data.get("sampled", False) and seed is None:
        seed = 0
    drivers = data.get("drivers")
    output_dir = data.get("output_dir")
    return RunParameters(
        name=str(data.get("name", "scenario")),
        days=_integer(data.get("days", DEFAULT_DAYS), "scenario.days"),
        drivers=None if drivers is None else _integer(drivers, "scenario.drivers"),
        seed=None if seed is None else _integer(seed, "scenario.seed"),
        output_dir=None if output_dir is None else Path(str(output_dir)),
    )
