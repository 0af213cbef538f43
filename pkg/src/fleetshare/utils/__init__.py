"""Shared helpers: number formatting, hashing and timestamps."""

from fleetshare.utils.formatting import SIGNIFICANT_DIGITS, format_number
from fleetshare.utils.hashing import calculate_file_sha256, format_sha256
from fleetshare.utils.timestamps import get_iso_timestamp

__all__ = [
    "SIGNIFICANT_DIGITS",
    "format_number",
    "format_sha256",
    "calculate_file_sha256",
    "get_iso_timestamp",
]
