"""Offer feasibility, assignment plans and two-route reduction."""

from fleetshare.feasibility.criterion import criterion_breakpoints, feasible_by_criterion
from fleetshare.feasibility.greedy import feasible, feasible_mixed, feasible_not_exceeding
from fleetshare.feasibility.models import (
    AssignmentPlan,
    DriverOffer,
    FeasibilityResult,
    MixedRouting,
    OfferProfile,
    Routing,
    SimplexComponent,
    SimplexMeasure,
    check_mass_and_mean,
)
from fleetshare.feasibility.plans import (
    plan_from_simplex_measure,
    symmetric_acceptance_bound,
    symmetric_plan,
    symmetric_profile,
    two_route_plan,
)
from fleetshare.feasibility.two_route_max import two_rmax, two_rmax_measure

__all__ = [
    "AssignmentPlan",
    "DriverOffer",
    "FeasibilityResult",
    "MixedRouting",
    "OfferProfile",
    "Routing",
    "SimplexComponent",
    "SimplexMeasure",
    "check_mass_and_mean",
    "criterion_breakpoints",
    "feasible",
    "feasible_by_criterion",
    "feasible_mixed",
    "feasible_not_exceeding",
    "plan_from_simplex_measure",
    "symmetric_acceptance_bound",
    "symmetric_plan",
    "symmetric_profile",
    "two_rmax",
    "two_rmax_measure",
    "two_route_plan",
]
