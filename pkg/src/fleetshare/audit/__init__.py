"""JSONL audit logging for scenario runs.

Main Components
---------------
- AuditLogger: append-only JSONL event logger
- LogEvent: one logged event
- generate_run_id: unique run identifiers
"""

from fleetshare.audit.helpers import generate_run_id, get_package_version
from fleetshare.audit.logger import AuditLogger
from fleetshare.audit.models import EventType, LogEvent, LogLevel

__all__ = [
    "AuditLogger",
    "EventType",
    "LogEvent",
    "LogLevel",
    "generate_run_id",
    "get_package_version",
]
