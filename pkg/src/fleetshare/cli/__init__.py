"""fleetshare.cli module.

Command-line interface for feasibility checks, schedules, market analysis,
risk and scenario runs.
"""

from fleetshare.cli.main import cli

__all__ = ["cli"]
