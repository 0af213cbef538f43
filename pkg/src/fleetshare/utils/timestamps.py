"""UTC timestamps for audit events."""

from datetime import UTC, datetime

__all__ = ["get_iso_timestamp"]


def get_iso_timestamp() -> str:
    """Return the current UTC time in ISO 8601 with microseconds and a ``Z`` suffix.

    Only audit events carry timestamps; report artifacts never do.
    """
    return datetime.now(UTC).isoformat().replace("+00:00", "Z")
