"""Parallel-route networks with Wardrop and system-optimum solvers."""

from fleetshare.network.delays import (
    BPR_DEFAULT_ALPHA,
    BPR_DEFAULT_BETA,
    DELAY_REGISTRY,
    AffineDelay,
    BPRDelay,
    DelayFunction,
    DelayKind,
    delay_from_dict,
)
from fleetshare.network.equilibrium import (
    equilibrium_given_fleet,
    mean_travel_time,
    system_optimum,
    total_travel_time,
    travel_times,
    wardrop_equilibrium,
)
from fleetshare.network.models import FlowVector, Network

__all__ = [
    "BPR_DEFAULT_ALPHA",
    "BPR_DEFAULT_BETA",
    "DELAY_REGISTRY",
    "AffineDelay",
    "BPRDelay",
    "DelayFunction",
    "DelayKind",
    "FlowVector",
    "Network",
    "delay_from_dict",
    "equilibrium_given_fleet",
    "mean_travel_time",
    "system_optimum",
    "total_travel_time",
    "travel_times",
    "wardrop_equilibrium",
]
