"""Finite discrete measures with initial sections and partial expectations."""

from fleetshare.measures.discrete import (
    DECISION_TOL,
    MASS_TOL,
    DiscreteMeasure,
    canonicalize,
    initial_section,
    partial_expectation,
    subtract,
)
from fleetshare.measures.io import measure_from_pairs, read_measure_csv, write_measure_csv

__all__ = [
    "DECISION_TOL",
    "MASS_TOL",
    "DiscreteMeasure",
    "canonicalize",
    "initial_section",
    "partial_expectation",
    "subtract",
    "measure_from_pairs",
    "read_measure_csv",
    "write_measure_csv",
]
