"""Individualized travel-time offers for fleets of connected automated vehicles.

This package provides:
- Measures (fleetshare.measures): finite discrete measures
- Network (fleetshare.network): delay functions, Wardrop and system optimum
- Feasibility (fleetshare.feasibility): offer profiles, plans and feasibility tests
- Scheduler (fleetshare.scheduler): Birkhoff decomposition and day-by-day schedules
- Market (fleetshare.market): discount factors, full-market offers, mixed routing
- Risk (fleetshare.risk): schedule-delay penalties and departure offsets
- Engine (fleetshare.engine): scenario configuration, runner and reports
- Audit (fleetshare.audit): JSONL audit logging
- CLI (fleetshare.cli): command-line interface
- Public API (fleetshare.api): file readers, writers and scenario runs
"""

__version__ = "0.1.0"
__author__ = "fleetshare developers"
__license__ = "MIT"

from fleetshare.api import (
    read_distribution,
    read_gamma,
    read_network,
    read_plan,
    read_profile,
    read_routing,
    read_strategy,
    run_scenario_file,
    write_plan_csv,
    write_profile_csv,
    write_schedule_csv,
    write_simplex_measure_csv,
)
from fleetshare.errors import ConfigError, FleetShareError
from fleetshare.feasibility import AssignmentPlan, MixedRouting, OfferProfile, Routing
from fleetshare.market import DiscountProfile, DriverAttitude
from fleetshare.measures import DiscreteMeasure
from fleetshare.network import Network

__all__ = [
    "__version__",
    "__author__",
    "__license__",
    "AssignmentPlan",
    "ConfigError",
    "DiscountProfile",
    "DiscreteMeasure",
    "DriverAttitude",
    "FleetShareError",
    "MixedRouting",
    "Network",
    "OfferProfile",
    "Routing",
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
