"""Tests for the JSONL audit logger."""

import json
from collections.abc import Iterator
from pathlib import Path
from typing import Any

import pytest

from fleetshare.audit.logger import AuditLogger


@pytest.fixture
def logger(tmp_path: Path) -> Iterator[AuditLogger]:
    """Audit logger for one scenario run, closed on teardown."""
    with AuditLogger(run_id="run-mixed", log_path=tmp_path / "audit" / "run.jsonl") as audit:
        yield audit


def _read_events(path: Path) -> list[dict[str, Any]]:
    with path.open(encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


@pytest.mark.unit
def test_logger_opens_log_in_new_directory(logger: AuditLogger) -> None:
    """Test the log directory is created and no stage is active yet."""
    assert logger.log_path.parent.is_dir()
    assert logger.log_path.exists()
    assert logger.current_stage is None


@pytest.mark.unit
def test_event_envelope(logger: AuditLogger) -> None:
    """Test one compact line carrying every envelope field."""
    logger.event("verdict_reached", data={"verdict": "DFHE"}, rid="enthusiastic")

    raw = logger.log_path.read_text(encoding="utf-8")
    (record,) = _read_events(logger.log_path)

    assert raw.count("\n") == 1
    assert ", " not in raw
    assert set(record) == {"ts", "run_id", "level", "event", "data", "stage", "rid"}
    assert record["run_id"] == "run-mixed"
    assert (record["level"], record["rid"]) == ("INFO", "enthusiastic")
    assert record["data"] == {"verdict": "DFHE"}
    assert record["ts"].endswith("Z")


@pytest.mark.unit
def test_explicit_stage_overrides_current(logger: AuditLogger) -> None:
    """Test the per-event stage wins over the current one without replacing it."""
    logger.set_stage("market")
    logger.event("a")
    logger.event("b", stage="schedule")
    logger.event("c")
    logger.set_stage(None)
    logger.event("d")

    stages = [record["stage"] for record in _read_events(logger.log_path)]

    assert stages == ["market", "schedule", "market", None]


@pytest.mark.unit
@pytest.mark.parametrize(
    ("method", "kwargs", "expected_event", "expected_level"),
    [
        ("run_started", {"command": ["fleetshare"], "parameters": {"k": 1}}, "run_started", "INFO"),
        ("run_finished", {"status": "success", "duration_seconds": 1.5}, "run_finished", "INFO"),
        ("stage_started", {"stage": "network"}, "stage_started", "INFO"),
        (
            "stage_finished",
            {"stage": "network", "duration_seconds": 2.0, "counters": {"routes": 2}},
            "stage_finished",
            "INFO",
        ),
        (
            "verdict_reached",
            {"verdict": "DFHE", "market_share": 1.0, "nested": "NFHE", "offer": "yes"},
            "verdict_reached",
            "INFO",
        ),
        ("error", {"exception_class": "ValueError", "message": "bad"}, "error", "ERROR"),
    ],
)
def test_logger_convenience_methods(
    logger: AuditLogger,
    method: str,
    kwargs: dict[str, Any],
    expected_event: str,
    expected_level: str,
) -> None:
    """Test all convenience methods produce correct event type and level."""
    getattr(logger, method)(**kwargs)

    events = _read_events(logger.log_path)

    assert len(events) == 1
    assert events[0]["event"] == expected_event
    assert events[0]["level"] == expected_level


@pytest.mark.unit
def test_logger_optional_payload_fields(logger: AuditLogger) -> None:
    """Test that optional fields are only written when given."""
    logger.verdict_reached("NOT_EQUILIBRIUM", 0.9)
    logger.stage_finished("market", 0.5, counters={})
    logger.error("ValueError", "bad")

    verdict, finished, error = _read_events(logger.log_path)

    assert verdict["data"] == {"verdict": "NOT_EQUILIBRIUM", "market_share": 0.9}
    assert finished["data"] == {"duration_seconds": 0.5}
    assert error["data"] == {"exception_class": "ValueError", "message": "bad"}


@pytest.mark.unit
def test_logger_artifact_written_hashes_file(logger: AuditLogger, tmp_path: Path) -> None:
    """Test that artifact events carry the relative path, digest and size."""
    root = tmp_path / "out"
    artifact = root / "nested" / "utilities.csv"
    artifact.parent.mkdir(parents=True)
    artifact.write_bytes(b"driver_id\na\n")

    logger.set_stage("report")
    logger.artifact_written(artifact, root, record_count=1)

    (event,) = _read_events(logger.log_path)

    assert event["stage"] == "report"
    assert event["data"]["path"] == "nested/utilities.csv"
    assert event["data"]["sha256"].startswith("sha256:")
    assert event["data"]["bytes"] == 12
    assert event["data"]["record_count"] == 1


@pytest.mark.unit
def test_logger_stage_context(logger: AuditLogger) -> None:
    """Test the stage block writes start and finish with counters."""
    with logger.stage("simulation") as counters:
        counters["days"] = 10
        logger.event("inner")

    started, inner, finished = _read_events(logger.log_path)

    assert started["event"] == "stage_started"
    assert inner["stage"] == "simulation"
    assert finished["data"]["counters"] == {"days": 10}
    assert finished["data"]["duration_seconds"] >= 0


@pytest.mark.unit
def test_logger_stage_context_skips_finish_on_error(logger: AuditLogger) -> None:
    """Test that a failing block leaves no stage_finished event."""
    with pytest.raises(RuntimeError), logger.stage("schedule"):
        raise RuntimeError("boom")

    events = _read_events(logger.log_path)

    assert [e["event"] for e in events] == ["stage_started"]
    assert logger.current_stage == "schedule"


@pytest.mark.unit
def test_logger_stage_started_sets_current_stage(logger: AuditLogger) -> None:
    """Test that stage events move the stage context and run_finished clears it."""
    logger.stage_started("feasibility")
    logger.error("ValueError", "bad", traceback="Traceback ...")
    logger.run_finished("failed", 0.1)

    started, error, finished = _read_events(logger.log_path)

    assert started["stage"] == "feasibility"
    assert error["stage"] == "feasibility"
    assert error["data"]["traceback"] == "Traceback ..."
    assert finished["stage"] is None


@pytest.mark.unit
def test_runs_share_one_log(tmp_path: Path) -> None:
    """Test that consecutive runs append to the same file in order."""
    log_path = tmp_path / "shared.jsonl"

    for run_id in ("run-hdv", "run-offer"):
        with AuditLogger(run_id=run_id, log_path=log_path) as audit:
            audit.run_started(["fleetshare", "scenario"], {"name": run_id})
            audit.run_finished("success", 0.0)

    records = _read_events(log_path)

    assert [(r["run_id"], r["event"]) for r in records] == [
        ("run-hdv", "run_started"),
        ("run-hdv", "run_finished"),
        ("run-offer", "run_started"),
        ("run-offer", "run_finished"),
    ]


@pytest.mark.unit
def test_close_is_idempotent(tmp_path: Path) -> None:
    """Test that closing twice is harmless and flushes pending lines."""
    audit = AuditLogger(run_id="run-close", log_path=tmp_path / "x" / "y" / "run.jsonl")
    audit.stage_started("network")
    audit.close()
    audit.close()

    assert len(_read_events(audit.log_path)) == 1
