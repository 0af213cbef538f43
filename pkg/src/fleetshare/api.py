"""Public API: input file readers, result writers and scenario runs.

Routings, plans, networks and fleet strategies are TOML documents;
offer profiles, discount profiles and distributions are CSV files with a
header row. Route numbers in files are 1-based.
"""

from __future__ import annotations

import csv
import tomllib
from collections.abc import Iterator, Mapping, Sequence
from pathlib import Path
from typing import TYPE_CHECKING, Any

from fleetshare.errors import ConfigError
from fleetshare.feasibility.models import (
    AssignmentPlan,
    OfferProfile,
    Routing,
    SimplexMeasure,
)
from fleetshare.market.models import DiscountProfile, DriverAttitude
from fleetshare.measures.discrete import DiscreteMeasure
from fleetshare.measures.io import measure_from_pairs, read_measure_csv
from fleetshare.network.delays import delay_from_dict
from fleetshare.network.models import Network
from fleetshare.scheduler.models import MultiDaySchedule
from fleetshare.utils.formatting import format_number

if TYPE_CHECKING:
    from fleetshare.engine.config import StrategySpec
    from fleetshare.engine.report import RunReport

__all__ = [
    "read_distribution",
    "read_gamma",
    "read_network",
    "read_plan",
    "read_profile",
    "read_routing",
    "read_strategy",
    "run_scenario_file",
    "write_plan_csv",
    "write_profile_csv",
    "write_schedule_csv",
    "write_simplex_measure_csv",
]


# ---------------------------------------------------------------------------
# Low-level helpers
# ---------------------------------------------------------------------------


def _load_toml(path: str | Path) -> dict[str, Any]:
    file_path = Path(path)
    if not file_path.exists():
        raise FileNotFoundError(f"File not found: {path}")
    with file_path.open("rb") as f:
        try:
            return tomllib.load(f)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"invalid TOML in {file_path.name}: {exc}") from exc


def _floats(data: Mapping[str, Any], key: str) -> tuple[float, ...]:
    value = data.get(key)
    if not isinstance(value, list):
        raise ConfigError("expected a list of numbers", key)
    try:
        return tuple(float(v) for v in value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"non-numeric entry in {value!r}", key) from exc


def _csv_rows(path: str | Path, columns: Sequence[str]) -> Iterator[tuple[int, dict[str, str]]]:
    """Yield ``(line number, row)`` after checking the header."""
    file_path = Path(path)
    if not file_path.exists():
        raise FileNotFoundError(f"File not found: {path}")
    with file_path.open(newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or list(reader.fieldnames) != list(columns):
            raise ConfigError(
                f"expected header {','.join(columns)}, got {reader.fieldnames}", file_path.name
            )
        for row in reader:
            yield reader.line_num, row


def _csv_float(row: Mapping[str, str], key: str, where: str) -> float:
    try:
        return float(row[key])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"non-numeric {key} {row[key]!r}", where) from exc


def _write_rows(path: str | Path, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    file_path = Path(path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    with file_path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


# ---------------------------------------------------------------------------
# Readers
# ---------------------------------------------------------------------------


def read_routing(path: str | Path) -> Routing:
    """Read a routing document with ``flows`` and ``times`` lists.

    Raises
    ------
    ConfigError
        If a list is missing or non-numeric.
    """
    data = _load_toml(path)
    try:
        return Routing.of(_floats(data, "flows"), _floats(data, "times"))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc), Path(path).name) from exc


def read_strategy(path: str | Path) -> StrategySpec:
    """Read a fleet strategy document.

    The document uses the keys of a scenario's ``[strategy]`` table. Without
    ``kind`` it is ``mixed`` when it has ``[[components]]`` and
    ``deterministic`` when it has ``flows``.

    Raises
    ------
    ConfigError
        With the dotted path of the first offending field.
    """
    from fleetshare.engine.config import parse_strategy

    data = _load_toml(path)
    if "kind" not in data:
        if "components" in data:
            data["kind"] = "mixed"
        elif "flows" in data:
            data["kind"] = "deterministic"
    return parse_strategy(data)


def read_network(path: str | Path) -> Network:
    """Read a network document with ``demand`` and ``[[routes]]`` tables."""
    data = _load_toml(path)
    tables = data.get("routes")
    if not isinstance(tables, list) or not tables:
        raise ConfigError("expected an array of tables", "routes")
    routes = tuple(delay_from_dict(spec, f"routes[{i}]") for i, spec in enumerate(tables))
    try:
        return Network(routes=routes, demand=float(data.get("demand", 1.0)))
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc), "demand") from exc


def read_plan(path: str | Path) -> AssignmentPlan:
    """Read an assignment plan document.

    The document has the routing's ``flows`` and ``times`` and one
    ``[[drivers]]`` table per row with ``id``, ``row`` and an optional
    ``weight`` (default 1).
    """
    data = _load_toml(path)
    routing = Routing.of(_floats(data, "flows"), _floats(data, "times"))
    tables = data.get("drivers")
    if not isinstance(tables, list) or not tables:
        raise ConfigError("expected an array of tables", "drivers")
    ids, weights, rows = [], [], []
    for i, table in enumerate(tables):
        ids.append(str(table.get("id", i + 1)))
        weights.append(float(table.get("weight", 1.0)))
        try:
            rows.append(_floats(table, "row"))
        except ConfigError as exc:
            raise ConfigError(str(exc), f"drivers[{i}]") from exc
    try:
        return AssignmentPlan.from_matrix(rows, routing, weights=weights, driver_ids=ids)
    except ValueError as exc:
        raise ConfigError(str(exc), "drivers") from exc


def read_profile(path: str | Path) -> OfferProfile:
    """Read a ``driver_id,weight,offer`` CSV file."""
    offers = [
        (
            row["driver_id"],
            _csv_float(row, "weight", f"line {line}"),
            _csv_float(row, "offer", f"line {line}"),
        )
        for line, row in _csv_rows(path, ("driver_id", "weight", "offer"))
    ]
    try:
        return OfferProfile.from_offers(offers)
    except ValueError as exc:
        raise ConfigError(str(exc), Path(path).name) from exc


def read_gamma(path: str | Path) -> DiscountProfile:
    """Read a ``driver_id,weight,gamma`` CSV file."""
    try:
        return DiscountProfile(
            tuple(
                DriverAttitude(
                    driver_id=row["driver_id"],
                    weight=_csv_float(row, "weight", f"line {line}"),
                    gamma=_csv_float(row, "gamma", f"line {line}"),
                )
                for line, row in _csv_rows(path, ("driver_id", "weight", "gamma"))
            )
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc), Path(path).name) from exc


def read_distribution(path: str | Path) -> DiscreteMeasure:
    """Read a travel-time distribution.

    ``.toml`` files hold ``atoms = [[location, weight], ...]``; anything else
    is read as a ``location,weight`` CSV file.
    """
    file_path = Path(path)
    if file_path.suffix == ".toml":
        return measure_from_pairs(_load_toml(file_path).get("atoms", []))
    if not file_path.exists():
        raise FileNotFoundError(f"File not found: {path}")
    return read_measure_csv(file_path)


# ---------------------------------------------------------------------------
# Writers
# ---------------------------------------------------------------------------


def write_plan_csv(plan: AssignmentPlan, path: str | Path) -> None:
    """Write ``driver_id,weight,route_1..route_R`` rows."""
    header = ["driver_id", "weight", *(f"route_{r + 1}" for r in range(plan.routing.route_count))]
    rows = [
        [driver_id, format_number(weight), *(format_number(x) for x in row)]
        for driver_id, weight, row in zip(
            plan.driver_ids, plan.weights, plan.proportions, strict=True
        )
    ]
    _write_rows(path, header, rows)


def write_profile_csv(profile: OfferProfile, path: str | Path) -> None:
    """Write ``driver_id,weight,offer`` rows."""
    rows = [
        [d.driver_id, format_number(d.weight), format_number(d.offer)] for d in profile.drivers
    ]
    _write_rows(path, ("driver_id", "weight", "offer"), rows)


def write_simplex_measure_csv(measure: SimplexMeasure, path: str | Path) -> None:
    """Write ``mass,alpha_1..alpha_R`` rows of a generating measure."""
    size = len(measure.components[0].point) if len(measure) else 0
    header = ["mass", *(f"alpha_{r + 1}" for r in range(size))]
    _write_rows(path, header, [[format_number(x) for x in row] for row in measure.to_rows()])


def write_schedule_csv(schedule: MultiDaySchedule, path: str | Path) -> None:
    """Write ``driver_id,day_1..day_J`` rows with 1-based routes."""
    header = ["driver_id", *(f"day_{j + 1}" for j in range(schedule.day_count))]
    _write_rows(path, header, schedule.to_rows())


# ---------------------------------------------------------------------------
# Scenarios
# ---------------------------------------------------------------------------


def run_scenario_file(
    path: str | Path,
    *,
    output_dir: str | Path | None = None,
    days: int | None = None,
    seed: int | None = None,
    audit_log: str | Path | None = None,
    command: list[str] | None = None,
) -> RunReport:
    """Load a scenario file, apply overrides and run it.

    Parameters
    ----------
    path : str | Path
        Scenario TOML file.
    output_dir : str | Path | None, optional
        Directory for the report artifacts; overrides the file's setting.
    days : int | None, optional
        Number of simulated days; overrides the file's setting.
    seed : int | None, optional
        Switches the day simulation to seeded i.i.d. sampling.
    audit_log : str | Path | None, optional
        JSONL audit log to append to.
    command : list[str] | None, optional
        Command line recorded in the audit log.

    Returns
    -------
    RunReport
        Run results; check ``success`` and ``accepted``.

    Raises
    ------
    FileNotFoundError
        If the scenario file does not exist.
    ConfigError
        If the scenario is invalid.

    Examples
    --------
    Run the bundled mixed-routing scenario:

        >>> from fleetshare import run_scenario_file
        >>> report = run_scenario_file("scenarios/mixed_routing.toml", output_dir="out")
        >>> report.histogram()[0]
        (1.1, 1.9)
    """
    from fleetshare.audit import AuditLogger, generate_run_id
    from fleetshare.engine import load_scenario, run_scenario

    config = load_scenario(path).with_overrides(
        days=days,
        seed=seed,
        output_dir=Path(output_dir) if output_dir is not None else None,
    )
    if audit_log is None:
        return run_scenario(config, command=command)
    with AuditLogger(generate_run_id(), Path(audit_log)) as logger:
        return run_scenario(config, logger, command=command)
