"""JSONL audit trail for scenario runs.

One compact JSON object per line, flushed as soon as it is written, so a
crashed run still leaves every event up to the failure on disk.
"""

import json
import time
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import asdict
from pathlib import Path
from typing import Any

from fleetshare.audit.helpers import get_package_version
from fleetshare.audit.models import EventType, LogEvent, LogLevel
from fleetshare.utils import calculate_file_sha256, get_iso_timestamp

__all__ = ["AuditLogger"]


def _payload(required: dict[str, Any], **optional: Any) -> dict[str, Any]:
    """Merge ``optional`` fields into ``required``, skipping None values."""
    data = dict(required)
    data.update({key: value for key, value in optional.items() if value is not None})
    return data


class AuditLogger:
    """Append-only event log bound to one run.

    Attributes
    ----------
    run_id : str
        Identifier stamped on every event.
    log_path : Path
        JSONL file; opened in append mode so runs can share it.
    current_stage : str | None
        Stage stamped on events that do not name one.
    """

    def __init__(self, run_id: str, log_path: Path) -> None:
        self.run_id = run_id
        self.log_path = log_path
        self.current_stage: str | None = None

        self.log_path.parent.mkdir(parents=True, exist_ok=True)
        self._file = self.log_path.open("a", encoding="utf-8")

    def __enter__(self) -> "AuditLogger":
        return self

    def __exit__(self, *args: Any) -> None:
        self.close()

    def close(self) -> None:
        """Flush and close the handle; safe to call twice."""
        if not self._file.closed:
            self._file.flush()
            self._file.close()

    def set_stage(self, stage: str | None) -> None:
        self.current_stage = stage

    # ------------------------------------------------------------------
    # Raw events
    # ------------------------------------------------------------------

    def event(
        self,
        event_type: str,
        data: dict[str, Any] | None = None,
        level: str = LogLevel.INFO,
        stage: str | None = None,
        rid: str | None = None,
    ) -> None:
        """Append one event.

        Parameters
        ----------
        event_type : str
            One of :class:`EventType`; free strings are written as given.
        data : dict[str, Any] | None, optional
            Payload, ``{}`` when omitted.
        level : str, optional
            Severity, ``INFO`` by default.
        stage : str | None, optional
            Overrides :attr:`current_stage` for this event only.
        rid : str | None, optional
            Driver or route the event is about.
        """
        record = LogEvent(
            ts=get_iso_timestamp(),
            run_id=self.run_id,
            level=str(level),
            event=str(event_type),
            data=data or {},
            stage=self.current_stage if stage is None else stage,
            rid=rid,
        )
        json.dump(asdict(record), self._file, ensure_ascii=False, separators=(",", ":"))
        self._file.write("\n")
        self._file.flush()

    # ------------------------------------------------------------------
    # Run and stage lifecycle
    # ------------------------------------------------------------------

    def run_started(self, command: list[str], parameters: dict[str, Any]) -> None:
        """Record the command line, the parameter snapshot and the package version."""
        self.event(
            EventType.RUN_STARTED,
            {
                "command": command,
                "parameters": parameters,
                "fleetshare_version": get_package_version(),
            },
        )

    def run_finished(self, status: str, duration_seconds: float) -> None:
        """Record the run outcome (``success`` or ``failed``) and clear the stage."""
        self.set_stage(None)
        self.event(
            EventType.RUN_FINISHED,
            {"status": status, "duration_seconds": duration_seconds},
        )

    def stage_started(self, stage: str) -> None:
        self.set_stage(stage)
        self.event(EventType.STAGE_STARTED, stage=stage)

    def stage_finished(
        self,
        stage: str,
        duration_seconds: float,
        counters: dict[str, int] | None = None,
    ) -> None:
        """Record a completed stage; empty ``counters`` are left out."""
        data = _payload({"duration_seconds": duration_seconds}, counters=counters or None)
        self.event(EventType.STAGE_FINISHED, data, stage=stage)

    @contextmanager
    def stage(self, name: str) -> Iterator[dict[str, int]]:
        """Bracket a block with stage events.

        The yielded dict collects counters for the ``stage_finished`` event.
        No finish event is written when the block raises; the caller logs
        the error instead.
        """
        counters: dict[str, int] = {}
        start = time.perf_counter()
        self.stage_started(name)
        yield counters
        self.stage_finished(name, time.perf_counter() - start, counters)

    # ------------------------------------------------------------------
    # Results
    # ------------------------------------------------------------------

    def verdict_reached(
        self,
        verdict: str,
        market_share: float,
        nested: str | None = None,
        offer: str | None = None,
    ) -> None:
        """Record the equilibrium verdict of the market stage.

        Parameters
        ----------
        verdict : str
            ``DFHE`` or ``NOT_EQUILIBRIUM``.
        market_share : float
            Fleet members' share of the population weight.
        nested : str | None, optional
            ``NFHE`` or ``NOT_VERIFIED``.
        offer : str | None, optional
            ``yes`` or ``no`` for strategies built on an offer profile.
        """
        data = _payload(
            {"verdict": verdict, "market_share": market_share}, nested=nested, offer=offer
        )
        self.event(EventType.VERDICT_REACHED, data)

    def artifact_written(
        self,
        path: Path,
        root: Path,
        record_count: int | None = None,
        stage: str | None = None,
    ) -> None:
        """Record a written file with its digest and size.

        Parameters
        ----------
        path : Path
            The file, which must exist.
        root : Path
            Output directory; the event stores ``path`` relative to it.
        record_count : int | None, optional
            Data rows, header excluded.
        stage : str | None, optional
            Producing stage, when not the current one.
        """
        data = _payload(
            {
                "path": path.relative_to(root).as_posix(),
                "sha256": calculate_file_sha256(path),
                "bytes": path.stat().st_size,
            },
            record_count=record_count,
        )
        self.event(EventType.ARTIFACT_WRITTEN, data, stage=stage)

    def error(
        self,
        exception_class: str,
        message: str,
        stage: str | None = None,
        rid: str | None = None,
        traceback: str | None = None,
    ) -> None:
        """Record a failure at ``ERROR`` level in the current (or given) stage."""
        data = _payload(
            {"exception_class": exception_class, "message": message}, traceback=traceback
        )
        self.event(EventType.ERROR, data, level=LogLevel.ERROR, stage=stage, rid=rid)
