"""Data models for Birkhoff decompositions and multi-day schedules."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt

from fleetshare.errors import DimensionMismatchError, NotDoublyStochasticError
from fleetshare.measures.discrete import DECISION_TOL, MASS_TOL

__all__ = [
    "DoublyStochasticMatrix",
    "BirkhoffTerm",
    "BirkhoffDecomposition",
    "DailyAssignment",
    "MultiDaySchedule",
]


@dataclass(frozen=True)
class DoublyStochasticMatrix:
    """Square matrix with non-negative entries and unit row and column sums.

    Attributes
    ----------
    entries : tuple[tuple[float, ...], ...]
        Row-major entries.
    """

    entries: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        """Validate shape, signs and marginals."""
        size = len(self.entries)
        if any(len(row) != size for row in self.entries):
            raise DimensionMismatchError("doubly stochastic matrix must be square")
        array = self.array
        if size and array.min() < -MASS_TOL:
            raise NotDoublyStochasticError("matrix has negative entries")
        rows = np.abs(array.sum(axis=1) - 1.0)
        cols = np.abs(array.sum(axis=0) - 1.0)
        if size and max(rows.max(), cols.max()) > DECISION_TOL:
            raise NotDoublyStochasticError(
                f"row/column sums deviate from 1 by up to {max(rows.max(), cols.max()):.3e}"
            )

    @classmethod
    def from_array(cls, matrix: npt.ArrayLike) -> DoublyStochasticMatrix:
        """Build from a 2-D array."""
        array = np.asarray(matrix, dtype=float)
        if array.ndim != 2:
            raise DimensionMismatchError("matrix must be two-dimensional")
        return cls(tuple(tuple(float(x) for x in row) for row in array))

    @property
    def size(self) -> int:
        """Number of rows (drivers)."""
        return len(self.entries)

    @property
    def array(self) -> npt.NDArray[np.float64]:
        """Entries as a ``(q, q)`` array."""
        return np.array(self.entries, dtype=float).reshape(len(self.entries), len(self.entries))


@dataclass(frozen=True)
class BirkhoffTerm:
    """One weighted permutation of a Birkhoff decomposition.

    Attributes
    ----------
    weight : float
        θ_z > 0.
    permutation : tuple[int, ...]
        ``permutation[i]`` is the column matched to row ``i``.
    """

    weight: float
    permutation: tuple[int, ...]

    def __post_init__(self) -> None:
        """Validate the permutation."""
        if sorted(self.permutation) != list(range(len(self.permutation))):
            raise ValueError(f"not a permutation: {self.permutation}")
        if self.weight < 0:
            raise ValueError(f"term weight must be >= 0, got {self.weight}")

    def matrix(self) -> npt.NDArray[np.float64]:
        """Return the permutation matrix P_z."""
        size = len(self.permutation)
        result = np.zeros((size, size))
        result[np.arange(size), self.permutation] = 1.0
        return result


@dataclass(frozen=True)
class BirkhoffDecomposition:
    """Convex combination Σ θ_z P_z of permutation matrices.

    Attributes
    ----------
    terms : tuple[BirkhoffTerm, ...]
        Terms in extraction order.
    residual : float
        Mass left undecomposed when the extraction stopped. Above 1e-12 the
        weights were rescaled by ``1 / (1 - residual)`` to sum to 1.
    """

    terms: tuple[BirkhoffTerm, ...]
    residual: float = 0.0

    def __post_init__(self) -> None:
        """Validate sizes and weights."""
        sizes = {len(term.permutation) for term in self.terms}
        if len(sizes) > 1:
            raise DimensionMismatchError("all permutations must have the same size")
        total = sum(term.weight for term in self.terms)
        if self.terms and abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"term weights must sum to 1, got {total}")
        if not 0.0 <= self.residual <= 1.0:
            raise ValueError(f"residual must lie in [0, 1], got {self.residual}")

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def weights(self) -> tuple[float, ...]:
        """θ_1, …, θ_Z."""
        return tuple(term.weight for term in self.terms)

    @property
    def size(self) -> int:
        """Matrix size q."""
        return len(self.terms[0].permutation) if self.terms else 0

    def reconstruct(self) -> npt.NDArray[np.float64]:
        """Return Σ θ_z P_z."""
        result = np.zeros((self.size, self.size))
        for term in self.terms:
            result += term.weight * term.matrix()
        return result

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary (1-based columns)."""
        return {
            "terms": [
                {"weight": term.weight, "permutation": [c + 1 for c in term.permutation]}
                for term in self.terms
            ],
            "residual": self.residual,
        }


@dataclass(frozen=True)
class DailyAssignment:
    """Route of every driver on one day.

    Attributes
    ----------
    routes : tuple[int, ...]
        0-based route index per driver.
    route_count : int
        Number of routes R.
    """

    routes: tuple[int, ...]
    route_count: int

    def __post_init__(self) -> None:
        """Validate route indices."""
        if any(r < 0 or r >= self.route_count for r in self.routes):
            raise ValueError(f"route index outside [0, {self.route_count})")

    @property
    def flows(self) -> tuple[int, ...]:
        """Number of drivers per route."""
        counts = np.bincount(np.array(self.routes, dtype=int), minlength=self.route_count)
        return tuple(int(c) for c in counts)

    def matrix(self) -> npt.NDArray[np.float64]:
        """Return the 0/1 driver × route matrix A_z."""
        result = np.zeros((len(self.routes), self.route_count))
        result[np.arange(len(self.routes)), self.routes] = 1.0
        return result


@dataclass(frozen=True)
class MultiDaySchedule:
    """Driver-to-route assignment ρ(i, j) for days 1..J.

    Attributes
    ----------
    driver_ids : tuple[str, ...]
        Row labels.
    days : tuple[DailyAssignment, ...]
        One assignment per day.
    terms : tuple[int, ...]
        Decomposition term used on each day.
    decomposition : BirkhoffDecomposition | None
        Decomposition the days were drawn from, if any.
    """

    driver_ids: tuple[str, ...]
    days: tuple[DailyAssignment, ...]
    terms: tuple[int, ...] = ()
    decomposition: BirkhoffDecomposition | None = None

    def __post_init__(self) -> None:
        """Validate dimensions."""
        for day in self.days:
            if len(day.routes) != len(self.driver_ids):
                raise DimensionMismatchError(
                    f"daily assignment covers {len(day.routes)} drivers, "
                    f"schedule has {len(self.driver_ids)}"
                )

    @property
    def day_count(self) -> int:
        """Number of days J."""
        return len(self.days)

    @property
    def route_count(self) -> int:
        """Number of routes R (0 for an empty schedule)."""
        return self.days[0].route_count if self.days else 0

    @property
    def routes(self) -> npt.NDArray[np.int_]:
        """ρ as a ``(drivers, days)`` array of 0-based route indices."""
        if not self.days:
            return np.zeros((len(self.driver_ids), 0), dtype=int)
        return np.array([day.routes for day in self.days], dtype=int).T

    def daily_flows(self) -> list[tuple[int, ...]]:
        """Per-day route counts."""
        return [day.flows for day in self.days]

    def route_frequencies(self) -> npt.NDArray[np.float64]:
        """Share of days each driver spends on each route, ``(drivers, routes)``."""
        result = np.zeros((len(self.driver_ids), self.route_count))
        for day in self.days:
            result += day.matrix()
        return result / max(1, self.day_count)

    def running_mean_times(self, times: Sequence[float]) -> npt.NDArray[np.float64]:
        """Per-driver mean travel time over the schedule."""
        if len(times) != self.route_count:
            raise DimensionMismatchError(f"{len(times)} times for {self.route_count} routes")
        return self.route_frequencies() @ np.asarray(times, dtype=float)

    def to_rows(self) -> list[list[Any]]:
        """Rows ``[driver_id, route_day_1, …]`` with 1-based route ids."""
        routes = self.routes
        return [
            [driver_id, *(int(r) + 1 for r in routes[i])]
            for i, driver_id in enumerate(self.driver_ids)
        ]
