"""Day-to-day travel times under a (possibly mixed) fleet routing."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from fleetshare.feasibility.models import MixedRouting
from fleetshare.scheduler.models import DailyAssignment, MultiDaySchedule
from fleetshare.scheduler.sequencing import day_sequence, validate_weights
from fleetshare.utils.formatting import format_number

__all__ = ["DaySimulation", "simulate_days", "time_histogram", "mixed_schedule"]


@dataclass
class DaySimulation:
    """Component drawn and route times on each simulated day.

    Attributes
    ----------
    components : tuple[int, ...]
        0-based component index per day.
    times : npt.NDArray[np.float64]
        ``(days, routes)`` travel times.
    """

    components: tuple[int, ...]
    times: npt.NDArray[np.float64]

    @property
    def day_count(self) -> int:
        """Number of simulated days."""
        return len(self.components)

    def component_counts(self, size: int) -> tuple[int, ...]:
        """Days spent in each of ``size`` components."""
        counts = np.bincount(np.array(self.components, dtype=int), minlength=size)
        return tuple(int(c) for c in counts)

    def histogram(self) -> tuple[tuple[float, ...], npt.NDArray[np.int_]]:
        """Per-route day counts over the distinct times; see :func:`time_histogram`."""
        return time_histogram(self.times)


def simulate_days(mix: MixedRouting, days: int, seed: int | None = None) -> DaySimulation:
    """Simulate ``days`` days of a mixed routing.

    Without a seed the components follow the deterministic quota sequence,
    so a 50/50 mixture yields exactly J/2 days of each. With a seed every
    day's component is drawn independently from
    ``numpy.random.default_rng(seed)``.

    Parameters
    ----------
    mix : MixedRouting
        Components with their route times.
    days : int
        Number of days J (>= 1).
    seed : int | None, optional
        Seed for i.i.d. sampling.

    Returns
    -------
    DaySimulation
        Components and route times per day.
    """
    if days < 1:
        raise ValueError(f"days must be >= 1, got {days}")
    theta = validate_weights(mix.probabilities)
    if seed is None:
        sequence = day_sequence(theta, days)
    else:
        p = np.array(theta)
        rng = np.random.default_rng(seed)
        sequence = [int(z) for z in rng.choice(len(p), size=days, p=p / p.sum())]
    table = np.array([routing.times for _, routing in mix.components], dtype=float)
    return DaySimulation(tuple(sequence), table[np.array(sequence, dtype=int)])


def time_histogram(
    times: npt.NDArray[np.float64],
) -> tuple[tuple[float, ...], npt.NDArray[np.int_]]:
    """Count days per distinct travel time on every route.

    Times are compared after rounding to the report precision, so values
    that print identically share a bin.

    Returns
    -------
    tuple[tuple[float, ...], npt.NDArray[np.int_]]
        Ascending bin values and a ``(routes, bins)`` count matrix whose rows
        sum to the number of days.

    Examples
    --------
    >>> bins, counts = time_histogram(np.array([[1.1, 1.9], [1.9, 1.1]]))
    >>> bins
    (1.1, 1.9)
    >>> counts.tolist()
    [[1, 1], [1, 1]]
    """
    rounded = np.vectorize(lambda x: float(format_number(x)), otypes=[float])(times)
    bins = np.unique(rounded)
    counts = np.zeros((rounded.shape[1], len(bins)), dtype=int)
    for r in range(rounded.shape[1]):
        values, hits = np.unique(rounded[:, r], return_counts=True)
        counts[r, np.searchsorted(bins, values)] = hits
    return tuple(float(b) for b in bins), counts


def mixed_schedule(
    simulation: DaySimulation,
    rule: Mapping[str, Sequence[int]],
    drivers: Sequence[tuple[str, str]],
    route_count: int,
) -> MultiDaySchedule:
    """Per-driver routes when every class follows its component rule.

    Parameters
    ----------
    simulation : DaySimulation
        Component of each day.
    rule : Mapping[str, Sequence[int]]
        0-based route per component for every class.
    drivers : Sequence[tuple[str, str]]
        ``(driver_id, class name)`` of every scheduled driver.
    route_count : int
        Number of routes R.
    """
    components = max(len(routes) for routes in rule.values())
    assignments = [
        DailyAssignment(tuple(rule[name][m] for _, name in drivers), route_count)
        for m in range(components)
    ]
    return MultiDaySchedule(
        driver_ids=tuple(driver_id for driver_id, _ in drivers),
        days=tuple(assignments[m] for m in simulation.components),
        terms=simulation.components,
    )
