"""Run identifiers and version lookup for audit logging."""

import importlib.metadata
import secrets
from datetime import UTC, datetime

__all__ = ["generate_run_id", "get_package_version"]


def generate_run_id() -> str:
    """Generate a unique run identifier.

    Returns
    -------
    str
        ``<ISO8601 timestamp>__<8 hex characters>``.
    """
    timestamp = datetime.now(UTC).isoformat().replace("+00:00", "Z")
    return f"{timestamp}__{secrets.token_hex(4)}"


def get_package_version() -> str:
    """Installed fleetshare version, or ``"unknown"`` in a source checkout."""
    try:
        return importlib.metadata.version("fleetshare")
    except importlib.metadata.PackageNotFoundError:
        return "unknown"
