"""Reduction of a simplex point to mixtures that use at most two routes.

Every driver that is split over many routes can be replaced by a mixture of
drivers who each use the fastest and the slowest route still carrying
weight, with the same mean travel time. Pairs are consumed from both ends
of the route list, so each (fast, slow) pair occurs at most once.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from fleetshare.errors import DimensionMismatchError
from fleetshare.feasibility.models import SimplexComponent, SimplexMeasure
from fleetshare.measures.discrete import DECISION_TOL, MASS_TOL

__all__ = ["two_rmax", "two_rmax_measure"]


def two_rmax(
    weights: Sequence[float],
    times: Sequence[float],
) -> list[tuple[float, tuple[float, ...]]]:
    """Split ``weights`` into components with at most two positive coordinates.

    Parameters
    ----------
    weights : Sequence[float]
        Non-negative route weights c (a simplex point or a flow vector).
    times : Sequence[float]
        Route travel times, strictly increasing.

    Returns
    -------
    list[tuple[float, tuple[float, ...]]]
        ``(mass, point)`` pairs. Masses add up to Σ c, every point has the
        mean time c · t / Σ c and Σ mass · point reproduces c.

    Raises
    ------
    DimensionMismatchError
        If weights and times differ in length.

    Examples
    --------
    >>> two_rmax([0.25, 0.5, 0.25], [10, 20, 30])
    [(0.5, (0.5, 0.0, 0.5)), (0.5, (0.0, 1.0, 0.0))]
    """
    if len(weights) != len(times):
        raise DimensionMismatchError(f"{len(weights)} weights for {len(times)} times")
    c = np.array(weights, dtype=float)
    t = np.array(times, dtype=float)
    if np.any(c < -MASS_TOL):
        raise ValueError(f"weights must be >= 0, got {tuple(weights)}")
    if np.any(np.diff(t) <= 0):
        raise ValueError("times must be strictly increasing")
    c = np.clip(c, 0.0, None)
    total = float(c.sum())
    if total <= MASS_TOL:
        return []

    size = len(c)
    target = float(c @ t) / total
    # tolerances scale with the input so flow vectors behave like simplex points
    dust = MASS_TOL * total
    tie = MASS_TOL * max(1.0, abs(target))
    result: list[tuple[float, tuple[float, ...]]] = []
    lo, hi = 0, size - 1

    while lo <= hi:
        if c[lo] <= dust:
            lo += 1
            continue
        if c[hi] <= dust:
            hi -= 1
            continue
        if lo == hi:
            # a lone route can only carry the mean itself; anything else is rounding residue
            if abs(t[lo] - target) <= tie or c[lo] > DECISION_TOL * total:
                result.append((float(c[lo]), _point(size, {lo: 1.0})))
            break

        pair_mean = (c[lo] * t[lo] + c[hi] * t[hi]) / (c[lo] + c[hi])
        if abs(pair_mean - target) <= tie:
            mass = float(c[lo] + c[hi])
            result.append((mass, _point(size, {lo: c[lo] / mass, hi: c[hi] / mass})))
            lo += 1
            hi -= 1
        elif pair_mean > target:
            # all of the fast route, just enough of the slow one
            taken = min(c[hi], max(0.0, c[lo] * (target - t[lo]) / (t[hi] - target)))
            mass = float(c[lo] + taken)
            result.append((mass, _point(size, {lo: c[lo] / mass, hi: taken / mass})))
            c[hi] -= taken
            lo += 1
        else:
            taken = min(c[lo], max(0.0, c[hi] * (t[hi] - target) / (target - t[lo])))
            mass = float(c[hi] + taken)
            result.append((mass, _point(size, {lo: taken / mass, hi: c[hi] / mass})))
            c[lo] -= taken
            hi -= 1
    return result


def _point(size: int, coordinates: dict[int, float]) -> tuple[float, ...]:
    point = [0.0] * size
    for index, value in coordinates.items():
        point[index] = float(value)
    return tuple(point)


def two_rmax_measure(measure: SimplexMeasure, times: Sequence[float]) -> SimplexMeasure:
    """Apply :func:`two_rmax` to every component of a simplex measure.

    Each component's mass is distributed over the reduced points; covered
    offer locations are kept, so the generated offer distribution is
    unchanged.
    """
    order = sorted(range(len(times)), key=lambda r: (times[r], r))
    sorted_times = [times[r] for r in order]
    merged_times, groups = _merge_equal(sorted_times, order)

    components: list[SimplexComponent] = []
    for component in measure:
        if component.mass <= 0:
            continue
        merged = [sum(component.point[r] for r in group) for group in groups]
        for mass, point in two_rmax(merged, merged_times):
            full = [0.0] * len(times)
            for value, group in zip(point, groups, strict=True):
                share = sum(component.point[r] for r in group)
                for r in group:
                    full[r] = value * component.point[r] / share if share > 0 else 0.0
            components.append(
                SimplexComponent(
                    component.mass * mass,
                    tuple(full),
                    location=component.location,
                )
            )
    return SimplexMeasure(tuple(components))


def _merge_equal(
    sorted_times: list[float], order: list[int]
) -> tuple[list[float], list[list[int]]]:
    merged: list[float] = []
    groups: list[list[int]] = []
    for time, route in zip(sorted_times, order, strict=True):
        if merged and abs(time - merged[-1]) <= MASS_TOL:
            groups[-1].append(route)
        else:
            merged.append(time)
            groups.append([route])
    return merged, groups
