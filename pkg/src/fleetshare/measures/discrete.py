"""Finite discrete measures on the real line.

A :class:`DiscreteMeasure` holds weighted atoms sorted by location. It
represents both an offer distribution (τ, the push-forward of the offered
mean travel times) and the route-time measure Q = Σ q_r δ_{t_r} of a routing.
The order-statistics operations below (initial sections, partial
expectations) are what the feasibility criterion is built on.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from typing import Any

from fleetshare.errors import MassOutOfRangeError, NegativeWeightError, NotDominatedError

__all__ = [
    "MASS_TOL",
    "DECISION_TOL",
    "DiscreteMeasure",
    "canonicalize",
    "initial_section",
    "partial_expectation",
    "subtract",
]

# Mass bookkeeping tolerance.
MASS_TOL = 1e-12
# Tolerance for feasibility / equilibrium decisions.
DECISION_TOL = 1e-9


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finite measure with atoms at strictly increasing locations.

    Instances are canonical: use :func:`canonicalize` to build one from
    arbitrary (location, weight) pairs.

    Attributes
    ----------
    atoms : tuple[tuple[float, float], ...]
        ``(location, weight)`` pairs, locations strictly increasing, weights > 0.
    """

    atoms: tuple[tuple[float, float], ...] = ()

    def __post_init__(self) -> None:
        """Validate canonical form."""
        previous: float | None = None
        for location, weight in self.atoms:
            if weight <= 0.0:
                raise NegativeWeightError(
                    f"atom at {location} has non-positive weight {weight}; use canonicalize()"
                )
            if previous is not None and location <= previous:
                raise ValueError("atom locations must be strictly increasing; use canonicalize()")
            previous = location

    @classmethod
    def empty(cls) -> DiscreteMeasure:
        """Return the zero measure."""
        return cls(())

    @classmethod
    def dirac(cls, location: float, weight: float = 1.0) -> DiscreteMeasure:
        """Return ``weight · δ_location``."""
        return canonicalize([(location, weight)])

    @property
    def locations(self) -> tuple[float, ...]:
        """Atom locations in ascending order."""
        return tuple(loc for loc, _ in self.atoms)

    @property
    def weights(self) -> tuple[float, ...]:
        """Atom weights in location order."""
        return tuple(w for _, w in self.atoms)

    def is_empty(self) -> bool:
        """Return True for the zero measure."""
        return not self.atoms

    def total_mass(self) -> float:
        """Sum of weights, accumulated in location order."""
        total = 0.0
        for _, weight in self.atoms:
            total += weight
        return total

    def mean(self) -> float:
        """Mean location of the normalized measure (0 for the empty measure)."""
        mass = self.total_mass()
        if mass <= 0.0:
            return 0.0
        return partial_expectation(self) / mass

    def mass_below(self, x: float, *, inclusive: bool = False) -> float:
        """Mass of atoms located below ``x`` (at or below when ``inclusive``)."""
        total = 0.0
        for location, weight in self.atoms:
            if location < x or (inclusive and location == x):
                total += weight
            else:
                break
        return total

    def scaled(self, factor: float) -> DiscreteMeasure:
        """Return the measure with every weight multiplied by ``factor``."""
        return canonicalize([(loc, w * factor) for loc, w in self.atoms])

    def normalized(self) -> DiscreteMeasure:
        """Return the probability measure proportional to this one."""
        mass = self.total_mass()
        if mass <= 0.0:
            raise MassOutOfRangeError("cannot normalize the empty measure")
        return self.scaled(1.0 / mass)

    def to_pairs(self) -> list[list[float]]:
        """Serialize as ``[[location, weight], ...]``."""
        return [[loc, w] for loc, w in self.atoms]

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {"atoms": self.to_pairs()}


def canonicalize(atoms: Iterable[tuple[float, float]]) -> DiscreteMeasure:
    """Build a canonical measure from arbitrary atoms.

    Atoms are sorted by location, duplicates merged (weights summed) and
    zero-weight atoms dropped.

    Parameters
    ----------
    atoms : Iterable[tuple[float, float]]
        ``(location, weight)`` pairs.

    Returns
    -------
    DiscreteMeasure
        Canonical measure.

    Raises
    ------
    NegativeWeightError
        If any weight is negative.

    Examples
    --------
    >>> canonicalize([(2, 0.5), (2, 0.5), (1, 0)]).atoms
    ((2.0, 1.0),)
    """
    merged: dict[float, float] = {}
    for location, weight in atoms:
        weight = float(weight)
        if weight < 0.0:
            raise NegativeWeightError(f"negative weight {weight} at location {location}")
        location = float(location)
        merged[location] = merged.get(location, 0.0) + weight
    return DiscreteMeasure(tuple((loc, merged[loc]) for loc in sorted(merged) if merged[loc] > 0.0))


def initial_section(measure: DiscreteMeasure, mass: float) -> DiscreteMeasure:
    """Return the leftmost sub-measure of ``measure`` with total mass ``mass``.

    With x(m) = inf{x : λ((−∞, x]) ≥ m}, the section is λ restricted to
    (−∞, x(m)) plus the remainder m − λ((−∞, x(m))) placed at x(m).

    Parameters
    ----------
    measure : DiscreteMeasure
        Source measure λ.
    mass : float
        Requested mass, ``0 <= mass <= total_mass + 1e-12``.

    Returns
    -------
    DiscreteMeasure
        The initial section λ^m.

    Raises
    ------
    MassOutOfRangeError
        If ``mass`` is negative or exceeds the total mass beyond tolerance.
    """
    total = measure.total_mass()
    if mass < -MASS_TOL or mass > total + MASS_TOL:
        raise MassOutOfRangeError(f"mass {mass} outside [0, {total}]")
    if mass >= total:
        return measure
    if mass <= 0.0:
        return DiscreteMeasure.empty()

    taken: list[tuple[float, float]] = []
    remaining = mass
    for location, weight in measure.atoms:
        if remaining <= 0.0:
            break
        piece = min(weight, remaining)
        taken.append((location, piece))
        remaining -= piece
    return canonicalize(taken)


def partial_expectation(measure: DiscreteMeasure) -> float:
    """Return Σ location · weight (the unnormalized first moment).

    Examples
    --------
    >>> partial_expectation(canonicalize([(1.1, 0.5), (1.9, 0.5)]))
    1.5
    """
    total = 0.0
    for location, weight in measure.atoms:
        total += location * weight
    return total


def subtract(minuend: DiscreteMeasure, subtrahend: DiscreteMeasure) -> DiscreteMeasure:
    """Return the canonical difference ``minuend − subtrahend``.

    Residual atoms lighter than the mass tolerance are dropped.

    Raises
    ------
    NotDominatedError
        If ``subtrahend`` exceeds ``minuend`` at some location beyond 1e-12.
    """
    remaining = dict(minuend.atoms)
    for location, weight in subtrahend.atoms:
        available = remaining.get(location, 0.0)
        difference = available - weight
        if difference < -MASS_TOL:
            raise NotDominatedError(
                f"cannot remove weight {weight} at {location}; only {available} available"
            )
        remaining[location] = difference
    return DiscreteMeasure(
        tuple((loc, remaining[loc]) for loc in sorted(remaining) if remaining[loc] > MASS_TOL)
    )
