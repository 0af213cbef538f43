"""Doubly stochastic expansion of plans and Birkhoff decomposition.

A plan μ over q atomic drivers with integer route flows q_r becomes a q × q
doubly stochastic matrix M by replacing column r with q_r copies of
μ(·, r) / q_r. Every permutation matrix in a decomposition of M, with its
column blocks summed back, is a daily assignment with the exact route flows.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from fleetshare.errors import NonIntegerFlowsError, NotDoublyStochasticError
from fleetshare.feasibility.models import AssignmentPlan
from fleetshare.measures.discrete import DECISION_TOL, MASS_TOL
from fleetshare.scheduler.matching import SupportMatcher
from fleetshare.scheduler.models import (
    BirkhoffDecomposition,
    BirkhoffTerm,
    DailyAssignment,
    DoublyStochasticMatrix,
)

__all__ = [
    "integer_flows",
    "expand_to_doubly_stochastic",
    "birkhoff_decompose",
    "recombine",
]

# Entries below this are ignored when searching for a matching.
SUPPORT_TOL = 1e-13


def integer_flows(flows: Sequence[float]) -> tuple[int, ...]:
    """Return ``flows`` as integers.

    Raises
    ------
    NonIntegerFlowsError
        If a flow is negative or further than 1e-9 from an integer.
    """
    result: list[int] = []
    for flow in flows:
        rounded = round(float(flow))
        if flow < 0 or abs(flow - rounded) > DECISION_TOL:
            raise NonIntegerFlowsError(
                f"route flows must be non-negative integers, got {tuple(flows)}; "
                "scale the drivers to an integer count first"
            )
        result.append(int(rounded))
    return tuple(result)


def expand_to_doubly_stochastic(
    plan: AssignmentPlan,
    flows: Sequence[float] | None = None,
) -> DoublyStochasticMatrix:
    """Expand a plan over atomic drivers into a doubly stochastic matrix.

    Parameters
    ----------
    plan : AssignmentPlan
        Plan with one row per driver, every driver of weight 1.
    flows : Sequence[float] | None, optional
        Integer route flows; defaults to the plan routing's flows.

    Returns
    -------
    DoublyStochasticMatrix
        M with M[i, c] = μ(i, r) / q_r for the q_r columns c of block r.

    Raises
    ------
    NonIntegerFlowsError
        If the flows are not integers, the drivers are not atomic, or the
        driver count differs from Σ q_r.
    NotDoublyStochasticError
        If the plan's route flows do not match ``flows``.
    """
    counts = integer_flows(plan.routing.flows if flows is None else flows)
    drivers = len(plan.driver_ids)
    if any(abs(w - 1.0) > DECISION_TOL for w in plan.weights):
        raise NonIntegerFlowsError("every driver must carry weight 1 to build a daily schedule")
    if drivers != sum(counts):
        raise NonIntegerFlowsError(f"{drivers} drivers for total route flow {sum(counts)}")

    mu = plan.matrix
    blocks = [
        np.repeat(mu[:, [r]] / count, count, axis=1)
        for r, count in enumerate(counts)
        if count > 0
    ]
    expanded = np.hstack(blocks) if blocks else np.zeros((drivers, 0))
    return DoublyStochasticMatrix.from_array(expanded)


def birkhoff_decompose(matrix: DoublyStochasticMatrix) -> BirkhoffDecomposition:
    """Decompose M into a convex combination of permutation matrices.

    Repeatedly matches rows to columns on the positive entries of the
    residual, takes θ as the smallest matched entry and subtracts θ · P.

    Parameters
    ----------
    matrix : DoublyStochasticMatrix
        Matrix to decompose.

    Returns
    -------
    BirkhoffDecomposition
        At most q² terms, each with weight above 1e-12. Mass below the
        matching support that could not be extracted is kept in ``residual``.

    Raises
    ------
    NotDoublyStochasticError
        If no perfect matching exists while the residual still carries mass.

    Examples
    --------
    >>> m = DoublyStochasticMatrix.from_array([[0.3, 0.7], [0.7, 0.3]])
    >>> [(round(t.weight, 12), t.permutation) for t in birkhoff_decompose(m).terms]
    [(0.7, (1, 0)), (0.3, (0, 1))]
    """
    residual = matrix.array.copy()
    size = matrix.size
    if size == 0:
        return BirkhoffDecomposition(())

    terms: list[BirkhoffTerm] = []
    remaining = 1.0
    for _ in range(size * size):
        if remaining <= MASS_TOL:
            break
        permutation = SupportMatcher(residual, SUPPORT_TOL).perfect_matching()
        if permutation is None:
            if remaining <= DECISION_TOL:
                break
            raise NotDoublyStochasticError(
                f"no perfect matching with residual mass {remaining:.3e} left"
            )
        rows = np.arange(size)
        theta = float(residual[rows, permutation].min())
        residual[rows, permutation] -= theta
        remaining -= theta
        terms.append(BirkhoffTerm(theta, permutation))

    total = sum(term.weight for term in terms)
    if abs(total - 1.0) > MASS_TOL:
        terms = [BirkhoffTerm(term.weight / total, term.permutation) for term in terms]
    return BirkhoffDecomposition(tuple(terms), residual=min(1.0, max(0.0, 1.0 - total)))


def recombine(permutation: Sequence[int], flows: Sequence[float]) -> DailyAssignment:
    """Turn a permutation of expanded columns into a daily route assignment.

    Column c belongs to route r when it lies in the r-th block of q_r
    columns.

    Examples
    --------
    >>> recombine((0, 2, 3, 1), (2, 1, 1)).routes
    (0, 1, 2, 0)
    """
    counts = integer_flows(flows)
    column_route = np.repeat(np.arange(len(counts)), counts)
    if len(permutation) != len(column_route):
        raise NonIntegerFlowsError(
            f"permutation of size {len(permutation)} for total route flow {len(column_route)}"
        )
    return DailyAssignment(
        tuple(int(column_route[c]) for c in permutation),
        route_count=len(counts),
    )
