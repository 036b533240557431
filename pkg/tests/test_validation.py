"""Tests for command-line argument validation."""

import pytest

from persistlab.utils.validation import parse_float_list, parse_n_list, validate_spec_text


def test_parse_n_list_comma():
    assert parse_n_list("4, 8,16") == ([4, 8, 16], "")


def test_parse_n_list_doubling_range():
    """The upper end is included only when doubling reaches it."""
    assert parse_n_list("64..512") == ([64, 128, 256, 512], "")
    assert parse_n_list("3..20") == ([3, 6, 12], "")


@pytest.mark.parametrize("text", ["", "  ", "8..4", "0..4", "4,x", "-4", "1.5"])
def test_parse_n_list_invalid(text):
    values, message = parse_n_list(text)
    assert values == []
    assert message


def test_parse_float_list():
    assert parse_float_list("16,64.5, 1e3") == ([16.0, 64.5, 1000.0], "")
    assert parse_float_list("a,b")[0] == []
    assert parse_float_list(",")[1]


def test_validate_spec_text():
    assert validate_spec_text("pareto:1.5") == (True, "")
    is_valid, message = validate_spec_text("pareto:2")
    assert not is_valid
    assert message
