"""Day-by-day driver schedules from assignment plans."""

from fleetshare.scheduler.birkhoff import (
    birkhoff_decompose,
    expand_to_doubly_stochastic,
    integer_flows,
    recombine,
)
from fleetshare.scheduler.matching import SupportMatcher
from fleetshare.scheduler.models import (
    BirkhoffDecomposition,
    BirkhoffTerm,
    DailyAssignment,
    DoublyStochasticMatrix,
    MultiDaySchedule,
)
from fleetshare.scheduler.schedule import build_schedule, sample_schedule, schedule_from_terms
from fleetshare.scheduler.sequencing import day_sequence, validate_weights

__all__ = [
    "BirkhoffDecomposition",
    "BirkhoffTerm",
    "DailyAssignment",
    "DoublyStochasticMatrix",
    "MultiDaySchedule",
    "SupportMatcher",
    "birkhoff_decompose",
    "build_schedule",
    "day_sequence",
    "expand_to_doubly_stochastic",
    "integer_flows",
    "recombine",
    "sample_schedule",
    "schedule_from_terms",
    "validate_weights",
]
