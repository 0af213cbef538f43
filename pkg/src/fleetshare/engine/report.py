"""Scenario report and its byte-stable CSV/JSON artifacts."""

from __future__ import annotations

import csv
import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt

from fleetshare.engine.simulation import DaySimulation
from fleetshare.market.models import EquilibriumVerdict, OfferVerdict, UtilityPair, VerdictKind
from fleetshare.scheduler.models import MultiDaySchedule
from fleetshare.utils.formatting import format_number

__all__ = ["ARTIFACT_NAMES", "RunReport", "emit_csv", "normalize_numbers"]

ARTIFACT_NAMES = (
    "utilities.csv",
    "timeseries.csv",
    "histogram.csv",
    "schedule.csv",
    "summary.json",
)

UTILITY_COLUMNS = ("driver_id", "gamma", "weight", "mode", "u_cav", "u_hdv")


@dataclass
class RunReport:
    """Results of one scenario run.

    Attributes
    ----------
    success : bool
        Whether every stage completed.
    scenario : str
        Scenario name.
    strategy : str
        Fleet strategy kind.
    days : int
        Number of simulated days J.
    seed : int | None
        Sampling seed; None means deterministic sequencing.
    route_count : int
        Number of routes R.
    network : dict[str, Any]
        Wardrop and system-optimum flows, times and totals, and the
        symmetric acceptance bound.
    utilities : tuple[UtilityPair, ...]
        Both disutilities per driver class.
    market_share : float
        Fleet share of the population weight.
    verdict : EquilibriumVerdict | None
        Switching incentives in the evaluated state.
    offer : OfferVerdict | None
        Offer verdict for offer-based strategies.
    feasible : bool | None
        Whether the strategy's offers are realizable, when checked.
    simulation : DaySimulation | None
        Day-to-day components and route times.
    schedule : MultiDaySchedule | None
        Per-driver routes, when an integer driver scale applies.
    details : dict[str, Any]
        Strategy-specific results (offers, stage trace, risk).
    parameters : dict[str, Any]
        Configuration snapshot.
    output_files : dict[str, str]
        Artifact name to written path.
    error_message : str | None
        ``"<ExceptionClass>: <message>"`` when the run failed.
    """

    success: bool
    scenario: str
    strategy: str
    days: int = 0
    seed: int | None = None
    route_count: int = 0
    network: dict[str, Any] = field(default_factory=dict)
    utilities: tuple[UtilityPair, ...] = ()
    market_share: float = 0.0
    verdict: EquilibriumVerdict | None = None
    offer: OfferVerdict | None = None
    feasible: bool | None = None
    simulation: DaySimulation | None = None
    schedule: MultiDaySchedule | None = None
    details: dict[str, Any] = field(default_factory=dict)
    parameters: dict[str, Any] = field(default_factory=dict)
    output_files: dict[str, str] = field(default_factory=dict)
    error_message: str | None = None

    @property
    def accepted(self) -> bool:
        """True for a stable state whose offers are realizable and accepted."""
        return (
            self.success
            and self.verdict is not None
            and self.verdict.kind is VerdictKind.DFHE
            and self.offer is not OfferVerdict.NO
            and self.feasible is not False
        )

    @property
    def timeseries(self) -> npt.NDArray[np.float64]:
        """``(days, routes)`` travel times."""
        if self.simulation is None:
            return np.zeros((0, self.route_count))
        return self.simulation.times

    def histogram(self) -> tuple[tuple[float, ...], npt.NDArray[np.int_]]:
        """Ascending time bins and per-route day counts."""
        if self.simulation is None:
            return (), np.zeros((self.route_count, 0), dtype=int)
        return self.simulation.histogram()

    def utility_of(self, driver_id: str) -> UtilityPair:
        """Return the pair of ``driver_id``."""
        for pair in self.utilities:
            if pair.driver_id == driver_id:
                return pair
        raise KeyError(driver_id)

    def summary(self) -> dict[str, Any]:
        """Content of ``summary.json``; free of timestamps and run identifiers."""
        bins, counts = self.histogram()
        data: dict[str, Any] = {
            "scenario": self.scenario,
            "strategy": self.strategy,
            "days": self.days,
            "seed": self.seed,
            "routes": self.route_count,
            "network": self.network,
            "market_share": self.market_share,
            "verdict": self.verdict.to_dict() if self.verdict is not None else None,
            "offer": self.offer.value if self.offer is not None else None,
            "feasible": self.feasible,
            "accepted": self.accepted,
            "utilities": [pair.to_dict() for pair in self.utilities],
            "histogram": {"bins": list(bins), "counts": counts.tolist()},
            "details": self.details,
            "parameters": self.parameters,
        }
        return normalize_numbers(data)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary, including run status and output files."""
        data = self.summary()
        data["success"] = self.success
        data["error_message"] = self.error_message
        data["output_files"] = dict(self.output_files)
        return data


def normalize_numbers(value: Any) -> Any:
    """Round every float in a JSON-like structure to the report precision.

    Examples
    --------
    >>> normalize_numbers({"t": [1.4300000000000002, 2]})
    {'t': [1.43, 2]}
    """
    if isinstance(value, bool) or value is None or isinstance(value, str | int):
        return value
    if isinstance(value, float | np.floating):
        return float(format_number(float(value)))
    if isinstance(value, dict):
        return {str(k): normalize_numbers(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [normalize_numbers(v) for v in value]
    if isinstance(value, np.integer):
        return int(value)
    return value


# ---------------------------------------------------------------------------
# Writers
# ---------------------------------------------------------------------------


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> int:
    count = 0
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
            count += 1
    return count


def _cell(value: Any) -> str:
    if isinstance(value, float | np.floating):
        return format_number(float(value))
    return str(value)


def emit_csv(report: RunReport, path: Path | str) -> dict[str, tuple[Path, int]]:
    """Write the report artifacts into directory ``path``.

    Writes ``utilities.csv``, ``timeseries.csv``, ``histogram.csv``,
    ``schedule.csv`` (only when the report has a schedule, otherwise a stale
    copy is removed) and
    ``summary.json``. Columns are fixed, numbers carry 12 significant digits
    and lines end with LF, so identical reports give identical bytes.

    Parameters
    ----------
    report : RunReport
        Report to write.
    path : Path | str
        Output directory, created if missing.

    Returns
    -------
    dict[str, tuple[Path, int]]
        Artifact name to ``(path, data row count)``, in write order.
    """
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    written: dict[str, tuple[Path, int]] = {}

    target = out / "utilities.csv"
    rows = (
        [
            pair.driver_id,
            _cell(float(pair.gamma)),
            _cell(float(pair.weight)),
            pair.mode.value,
            _cell(float(pair.u_cav)),
            _cell(float(pair.u_hdv)),
        ]
        for pair in report.utilities
    )
    written["utilities.csv"] = (target, _write_csv(target, UTILITY_COLUMNS, rows))

    route_columns = [f"route_{r + 1}" for r in range(report.route_count)]
    target = out / "timeseries.csv"
    series = report.timeseries
    rows = ([day + 1, *(_cell(t) for t in series[day])] for day in range(series.shape[0]))
    written["timeseries.csv"] = (target, _write_csv(target, ["day", *route_columns], rows))

    bins, counts = report.histogram()
    target = out / "histogram.csv"
    rows = ([r + 1, *(int(c) for c in counts[r])] for r in range(counts.shape[0]))
    written["histogram.csv"] = (
        target,
        _write_csv(target, ["route", *(format_number(b) for b in bins)], rows),
    )

    if report.schedule is not None:
        target = out / "schedule.csv"
        header = ["driver_id", *(f"day_{j + 1}" for j in range(report.schedule.day_count))]
        written["schedule.csv"] = (target, _write_csv(target, header, report.schedule.to_rows()))
    else:
        # a previous run into the same directory may have left one
        (out / "schedule.csv").unlink(missing_ok=True)

    target = out / "summary.json"
    with target.open("w", encoding="utf-8", newline="\n") as f:
        json.dump(report.summary(), f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write("\n")
    written["summary.json"] = (target, 1)
    return written
