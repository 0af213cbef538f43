"""Optimal departure offsets under schedule-delay penalties.

A human driver facing a random travel time T picks the planned travel
allowance ρ that minimizes E π(T − ρ). For the piecewise-linear penalty the
minimizer is the θ_LAP / (θ_LAP + θ_EAP) quantile of T; general convex
penalties are handled by bisection on the one-sided derivatives of the
expected penalty.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence

import numpy as np

from fleetshare.errors import NonConvexPenaltyError, NotProbabilityError
from fleetshare.measures.discrete import MASS_TOL, DiscreteMeasure, canonicalize
from fleetshare.risk.models import PenaltySpec, RiskResult
from fleetshare.risk.penalties import ConvexPenalty, LinearSchedulePenalty

__all__ = [
    "optimal_rho",
    "schedule_threshold",
    "two_point_rho",
    "route_disutilities",
    "hdv_route_choice_with_risk",
    "general_convex_rho",
]

# Bisection stops when the bracket is this small relative to the support width.
_BISECTION_TOL = 1e-13
_MAX_BISECTIONS = 200
# Sample points per convexity check.
_CONVEXITY_SAMPLES = 33


def _check_probability(distribution: DiscreteMeasure) -> None:
    mass = distribution.total_mass()
    if distribution.is_empty() or abs(mass - 1.0) > MASS_TOL:
        raise NotProbabilityError(f"travel-time distribution has mass {mass}, expected 1")


def optimal_rho(distribution: DiscreteMeasure, penalty: PenaltySpec) -> RiskResult:
    """Minimize the expected piecewise-linear schedule penalty.

    Parameters
    ----------
    distribution : DiscreteMeasure
        Travel-time distribution T (a probability measure).
    penalty : PenaltySpec
        Late and early values of time.

    Returns
    -------
    RiskResult
        ρ* is the smallest atom with F(ρ*) ≥ θ_LAP / (θ_LAP + θ_EAP). When F
        hits the ratio exactly at an atom that is not the last one, every ρ
        up to the next atom is optimal and the interval covers that gap.

    Raises
    ------
    NotProbabilityError
        If the distribution's mass differs from 1 by more than 1e-12.

    Examples
    --------
    >>> result = optimal_rho(canonicalize([(1.1, 0.5), (1.9, 0.5)]), PenaltySpec(2.0, 1.0))
    >>> result.rho, round(result.risk, 12), round(result.total, 12)
    (1.9, 0.4, 1.9)
    """
    _check_probability(distribution)
    ratio = penalty.critical_ratio
    locations = distribution.locations

    cumulative = 0.0
    index = len(locations) - 1
    for k, weight in enumerate(distribution.weights):
        cumulative += weight
        if cumulative >= ratio - MASS_TOL:
            index = k
            break

    rho = locations[index]
    upper = rho
    if abs(cumulative - ratio) <= MASS_TOL and index < len(locations) - 1:
        upper = locations[index + 1]

    risk = sum(w * penalty(t - rho) for t, w in distribution.atoms)
    return RiskResult(
        rho=rho,
        risk=risk,
        total=distribution.mean() + risk,
        interval=(rho, upper),
    )


def schedule_threshold(penalty: PenaltySpec) -> float:
    """Probability of the slow outcome above which ρ* jumps to the slow time.

    For T = (1 − p) δ_{t_min} + p δ_{t_max} the optimal offset is t_max when
    p exceeds θ_EAP / (θ_LAP + θ_EAP) and t_min when p is below it.

    Examples
    --------
    >>> schedule_threshold(PenaltySpec(2.0, 1.0))
    0.3333333333333333
    """
    if penalty.theta_eap <= 0:
        raise ValueError("the threshold needs a positive early-arrival value of time")
    return penalty.theta_eap / (penalty.theta_lap + penalty.theta_eap)


def two_point_rho(
    t_min: float,
    t_max: float,
    slow_probability: float,
    penalty: PenaltySpec,
) -> RiskResult:
    """Optimal offset for T = (1 − p) δ_{t_min} + p δ_{t_max}."""
    if not 0.0 <= slow_probability <= 1.0:
        raise NotProbabilityError(f"probability must lie in [0, 1], got {slow_probability}")
    return optimal_rho(
        canonicalize([(t_min, 1.0 - slow_probability), (t_max, slow_probability)]),
        penalty,
    )


def route_disutilities(
    distributions: Sequence[DiscreteMeasure], penalty: PenaltySpec
) -> list[RiskResult]:
    """Risk-adjusted disutility E[T_r] + risk_r of every route."""
    return [optimal_rho(distribution, penalty) for distribution in distributions]


def hdv_route_choice_with_risk(
    distributions: Sequence[DiscreteMeasure], penalty: PenaltySpec
) -> tuple[int, float]:
    """Pick the route minimizing E[T_r] + risk_r for a human driver.

    Returns
    -------
    tuple[int, float]
        0-based route index (lowest index on ties within 1e-12) and its
        disutility.
    """
    if not distributions:
        raise ValueError("at least one route distribution is required")
    totals = [result.total for result in route_disutilities(distributions, penalty)]
    best = 0
    for r, total in enumerate(totals):
        if total < totals[best] - MASS_TOL:
            best = r
    return best, totals[best]


# ---------------------------------------------------------------------------
# General convex penalties
# ---------------------------------------------------------------------------


def general_convex_rho(
    distribution: DiscreteMeasure,
    penalty: ConvexPenalty | PenaltySpec,
) -> RiskResult:
    """Minimize E π(T − ρ) for a convex penalty π by derivative bisection.

    ρ_lo is the smallest ρ where the right derivative of the expected
    penalty is non-negative, ρ_hi the largest where the left derivative is
    non-positive; both are searched on the support of T.

    Parameters
    ----------
    distribution : DiscreteMeasure
        Travel-time distribution (a probability measure).
    penalty : ConvexPenalty | PenaltySpec
        Convex penalty with π(0) = 0 and π ≥ 0.

    Returns
    -------
    RiskResult
        ρ* = ρ_lo and the interval [ρ_lo, ρ_hi].

    Raises
    ------
    NotProbabilityError
        If the distribution is not a probability measure.
    NonConvexPenaltyError
        If π fails a sampled midpoint-convexity check or π(0) ≠ 0.
    """
    _check_probability(distribution)
    pi: ConvexPenalty = (
        LinearSchedulePenalty.from_spec(penalty) if isinstance(penalty, PenaltySpec) else penalty
    )
    atoms = distribution.atoms
    locations = distribution.locations
    low, high = locations[0], locations[-1]
    _check_convex(pi, high - low)

    def right_slope(rho: float) -> float:
        return -float(sum(w * pi.left_derivative(t - rho) for t, w in atoms))

    def left_slope(rho: float) -> float:
        return -float(sum(w * pi.right_derivative(t - rho) for t, w in atoms))

    tol = _BISECTION_TOL * max(1.0, high - low)
    rho_lo = low
    if right_slope(low) < 0:
        rho_lo = _bisect(lambda x: right_slope(x) >= 0, low, high, tol)
    rho_hi = high
    if left_slope(high) > 0:
        rho_hi = _bisect(lambda x: left_slope(x) > 0, low, high, tol, left=True)
    rho_lo = _snap(rho_lo, locations)
    rho_hi = max(rho_lo, _snap(rho_hi, locations))
    if rho_hi - rho_lo <= 1e-9:
        rho_hi = rho_lo

    risk = float(sum(w * pi.value(t - rho_lo) for t, w in atoms))
    return RiskResult(
        rho=rho_lo,
        risk=risk,
        total=distribution.mean() + risk,
        interval=(rho_lo, rho_hi),
    )


def _bisect(
    predicate: Callable[[float], bool],
    low: float,
    high: float,
    tol: float,
    *,
    left: bool = False,
) -> float:
    """Boundary of a monotone predicate that is False at ``low`` and True at ``high``.

    Returns the upper end of the final bracket, or the lower end when
    ``left`` is set.
    """
    for _ in range(_MAX_BISECTIONS):
        if high - low <= tol:
            break
        middle = 0.5 * (low + high)
        if predicate(middle):
            high = middle
        else:
            low = middle
    return low if left else high


def _snap(value: float, locations: Sequence[float]) -> float:
    nearest = min(locations, key=lambda x: abs(x - value))
    return nearest if abs(nearest - value) <= 1e-9 else value


def _check_convex(pi: ConvexPenalty, width: float) -> None:
    if abs(pi.value(0.0)) > 1e-12:
        raise NonConvexPenaltyError(f"penalty must vanish at 0, got {pi.value(0.0)}")
    span = max(width, 1.0)
    grid = np.linspace(-span, span, _CONVEXITY_SAMPLES)
    values = [pi.value(float(x)) for x in grid]
    scale = max(1.0, max(abs(v) for v in values))
    if min(values) < -1e-12 * scale:
        raise NonConvexPenaltyError("penalty takes negative values")
    for gap in (1, 2, 4, 8):
        for i in range(len(grid) - 2 * gap):
            middle = values[i + gap]
            chord = 0.5 * (values[i] + values[i + 2 * gap])
            if middle > chord + 1e-9 * scale:
                raise NonConvexPenaltyError(
                    f"penalty is not convex around {float(grid[i + gap]):.6g}"
                )
