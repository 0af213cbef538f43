"""Number formatting shared by every CSV and JSON writer."""

__all__ = ["format_number", "SIGNIFICANT_DIGITS"]

SIGNIFICANT_DIGITS = 12


def format_number(value: float) -> str:
    """Format a number with 12 significant digits.

    Negative zero is written as ``0`` so equal reports give equal bytes.

    Examples
    --------
    >>> format_number(1.4300000000000002)
    '1.43'
    >>> format_number(-0.0)
    '0'
    """
    text = f"{float(value):.{SIGNIFICANT_DIGITS}g}"
    return "0" if text == "-0" else text
