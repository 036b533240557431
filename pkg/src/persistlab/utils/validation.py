"""Validation utilities for command-line arguments."""

import re
from typing import Tuple

from persistlab.constants.messages import CLI_FLOAT_LIST_INVALID, CLI_N_LIST_INVALID
from persistlab.distributions import parse_spec
from persistlab.models import SpecError

RANGE_REGEX = re.compile(r"^\s*(\d+)\s*\.\.\s*(\d+)\s*$")


def parse_n_list(text: str) -> Tuple[list[int], str]:
    """Parse a list of horizons.

    Accepts comma lists ("4,8,16") and doubling ranges ("64..8192" gives 64, 128, ...,
    8192; the upper end is included only when reached by doubling).

    Args:
        text: Raw option value.

    Returns:
        Tuple of (values, error_message).
        values: Parsed horizons, empty when invalid.
        error_message: Error description if invalid, empty string if valid.
    """
    if not text or not text.strip():
        return [], CLI_N_LIST_INVALID.format(text=text)

    match = RANGE_REGEX.match(text)
    if match:
        lo, hi = int(match.group(1)), int(match.group(2))
        if lo < 1 or hi < lo:
            return [], CLI_N_LIST_INVALID.format(text=text)
        values = []
        n = lo
        while n <= hi:
            values.append(n)
            n *= 2
        return values, ""

    values = []
    for part in text.split(","):
        part = part.strip()
        if not part.isdigit():
            return [], CLI_N_LIST_INVALID.format(text=text)
        values.append(int(part))
    return values, ""


def parse_float_list(text: str) -> Tuple[list[float], str]:
    """Parse a comma-separated list of numbers.

    Returns:
        Tuple of (values, error_message).
    """
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except (AttributeError, ValueError):
        return [], CLI_FLOAT_LIST_INVALID.format(text=text)
    if not values:
        return [], CLI_FLOAT_LIST_INVALID.format(text=text)
    return values, ""


def validate_spec_text(text: str) -> Tuple[bool, str]:
    """Validate a distribution spec string such as 'gaussian:1'.

    Returns:
        Tuple of (is_valid, error_message).
    """
    try:
        parse_spec(text)
    except SpecError as e:
        return False, str(e)
    return True, ""
