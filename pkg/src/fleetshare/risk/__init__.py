"""Schedule-delay risk: optimal departure offsets and risk-aware route choice."""

from fleetshare.risk.departure import (
    general_convex_rho,
    hdv_route_choice_with_risk,
    optimal_rho,
    route_disutilities,
    schedule_threshold,
    two_point_rho,
)
from fleetshare.risk.models import PenaltySpec, RiskResult
from fleetshare.risk.penalties import (
    AbsolutePenalty,
    CallablePenalty,
    ConvexPenalty,
    LinearSchedulePenalty,
    QuadraticPenalty,
)

__all__ = [
    "AbsolutePenalty",
    "CallablePenalty",
    "ConvexPenalty",
    "LinearSchedulePenalty",
    "PenaltySpec",
    "QuadraticPenalty",
    "RiskResult",
    "general_convex_rho",
    "hdv_route_choice_with_risk",
    "optimal_rho",
    "route_disutilities",
    "schedule_threshold",
    "two_point_rho",
]
