"""Multi-day schedules from assignment plans."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from fleetshare.feasibility.models import AssignmentPlan
from fleetshare.scheduler.birkhoff import (
    birkhoff_decompose,
    expand_to_doubly_stochastic,
    integer_flows,
    recombine,
)
from fleetshare.scheduler.models import BirkhoffDecomposition, MultiDaySchedule
from fleetshare.scheduler.sequencing import day_sequence, validate_weights

__all__ = ["build_schedule", "sample_schedule", "schedule_from_terms"]


def build_schedule(
    plan: AssignmentPlan,
    flows: Sequence[float] | None = None,
    days: int = 10,
) -> MultiDaySchedule:
    """Build a deterministic schedule whose long-run shares follow the plan.

    Parameters
    ----------
    plan : AssignmentPlan
        Plan over atomic drivers.
    flows : Sequence[float] | None, optional
        Integer route flows; defaults to the plan routing's flows.
    days : int, optional
        Number of days J, by default 10.

    Returns
    -------
    MultiDaySchedule
        Schedule carrying its decomposition. Every day
        carries the exact route flows; each driver's mean time over J days
        is within (t_max − t_min) · Z / J of the offer.
    """
    counts = integer_flows(plan.routing.flows if flows is None else flows)
    decomposition = birkhoff_decompose(expand_to_doubly_stochastic(plan, counts))
    sequence = day_sequence(decomposition.weights, days)
    return schedule_from_terms(decomposition, counts, sequence, plan.driver_ids)


def sample_schedule(
    decomposition: BirkhoffDecomposition,
    flows: Sequence[float],
    days: int,
    seed: int,
    driver_ids: Sequence[str] | None = None,
) -> MultiDaySchedule:
    """Draw the term of every day independently with probabilities θ.

    The draws come from ``numpy.random.default_rng(seed)``, so a seed
    reproduces the schedule exactly.
    """
    theta = np.array(validate_weights(decomposition.weights))
    rng = np.random.default_rng(seed)
    sequence = [int(z) for z in rng.choice(len(theta), size=days, p=theta / theta.sum())]
    return schedule_from_terms(decomposition, flows, sequence, driver_ids)


def schedule_from_terms(
    decomposition: BirkhoffDecomposition,
    flows: Sequence[float],
    sequence: Sequence[int],
    driver_ids: Sequence[str] | None = None,
) -> MultiDaySchedule:
    """Materialize the daily assignments for a sequence of term indices."""
    assignments = [recombine(term.permutation, flows) for term in decomposition.terms]
    ids = (
        tuple(driver_ids)
        if driver_ids is not None
        else tuple(str(i + 1) for i in range(decomposition.size))
    )
    return MultiDaySchedule(
        driver_ids=ids,
        days=tuple(assignments[z] for z in sequence),
        terms=tuple(sequence),
        decomposition=decomposition,
    )
