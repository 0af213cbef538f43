"""Deterministic day sequences with prescribed term frequencies."""

from __future__ import annotations

from collections.abc import Sequence

from fleetshare.errors import NotProbabilityError
from fleetshare.measures.discrete import DECISION_TOL

__all__ = ["day_sequence", "validate_weights"]


def validate_weights(weights: Sequence[float]) -> tuple[float, ...]:
    """Return ``weights`` as floats after checking they form a distribution.

    Raises
    ------
    NotProbabilityError
        If a weight is negative or the weights do not sum to 1 within 1e-9.
    """
    values = tuple(float(w) for w in weights)
    if not values or any(w < 0 for w in values):
        raise NotProbabilityError(f"weights must be non-negative, got {values}")
    if abs(sum(values) - 1.0) > DECISION_TOL:
        raise NotProbabilityError(f"weights must sum to 1, got {sum(values)}")
    return values


def day_sequence(weights: Sequence[float], days: int) -> list[int]:
    """Choose a term for each of ``days`` days so counts track θ_z · j.

    Uses the quota method: on day j a term is eligible while its count is
    below θ_z · j, and the eligible term with the largest θ_z / (count_z + 1)
    is taken (lowest index on ties). Every prefix then satisfies
    |count_z − θ_z · j| < 1.

    Parameters
    ----------
    weights : Sequence[float]
        Term weights θ, non-negative and summing to 1.
    days : int
        Sequence length J.

    Returns
    -------
    list[int]
        0-based term index per day.

    Examples
    --------
    >>> day_sequence([0.1, 0.1, 0.3, 0.4, 0.1], 10).count(3)
    4
    >>> day_sequence([0.5, 0.5], 4)
    [0, 1, 0, 1]
    """
    theta = validate_weights(weights)
    if days < 0:
        raise ValueError(f"days must be >= 0, got {days}")
    counts = [0] * len(theta)
    sequence: list[int] = []
    for day in range(1, days + 1):
        best: int | None = None
        best_priority = -1.0
        for z, weight in enumerate(theta):
            if counts[z] >= weight * day - DECISION_TOL:
                continue
            priority = weight / (counts[z] + 1)
            if priority > best_priority:
                best, best_priority = z, priority
        if best is None:
            best = max(range(len(theta)), key=lambda z: (theta[z] * day - counts[z], -z))
        counts[best] += 1
        sequence.append(best)
    return sequence
