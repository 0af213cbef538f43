"""CSV and TOML codecs for discrete measures.

CSV files have a ``location,weight`` header; TOML documents use a list of
``[location, weight]`` pairs.
"""

from __future__ import annotations

import csv
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from fleetshare.errors import ConfigError
from fleetshare.measures.discrete import DiscreteMeasure, canonicalize
from fleetshare.utils.formatting import format_number

__all__ = ["MEASURE_COLUMNS", "measure_from_pairs", "read_measure_csv", "write_measure_csv"]

MEASURE_COLUMNS = ("location", "weight")


def measure_from_pairs(pairs: Sequence[Any], path: str = "atoms") -> DiscreteMeasure:
    """Build a measure from ``[[location, weight], ...]`` as found in TOML.

    Parameters
    ----------
    pairs : Sequence[Any]
        Location/weight pairs.
    path : str, optional
        Field path used in error messages.

    Raises
    ------
    ConfigError
        If an entry is not a numeric pair or a weight is negative.
    """
    atoms: list[tuple[float, float]] = []
    for index, pair in enumerate(pairs):
        if not isinstance(pair, Sequence) or isinstance(pair, str) or len(pair) != 2:
            raise ConfigError("expected a [location, weight] pair", f"{path}[{index}]")
        try:
            location, weight = float(pair[0]), float(pair[1])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"non-numeric entry {pair!r}", f"{path}[{index}]") from exc
        if weight < 0:
            raise ConfigError(f"negative weight {weight}", f"{path}[{index}]")
        atoms.append((location, weight))
    return canonicalize(atoms)


def read_measure_csv(path: Path) -> DiscreteMeasure:
    """Read a ``location,weight`` CSV file into a canonical measure.

    Raises
    ------
    ConfigError
        If the header is wrong or a row is malformed.
    """
    with path.open(newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or tuple(reader.fieldnames[:2]) != MEASURE_COLUMNS:
            raise ConfigError(f"expected header {','.join(MEASURE_COLUMNS)}", str(path))
        pairs = [[row["location"], row["weight"]] for row in reader]
    return measure_from_pairs(pairs, path=str(path))


def write_measure_csv(measure: DiscreteMeasure, path: Path) -> None:
    """Write a measure as ``location,weight`` CSV with LF line endings."""
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(MEASURE_COLUMNS)
        for location, weight in measure.atoms:
            writer.writerow([format_number(location), format_number(weight)])
