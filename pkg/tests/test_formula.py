import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from voronoi_distill.policies.formula import (
    default_labels,
    format_coefficient,
    format_formula,
    parse_formula,
)
from voronoi_distill.utils.constants import FormulaStyle
from voronoi_distill.utils.reference import MOUNTAINCAR_TABLE, SIMPLEGOAL_TABLE

coefficient = st.floats(-50, 50, allow_nan=False, allow_infinity=False)


def test_published_first_row():
    assert format_formula([-0.148, -0.021], -0.055, ["x", "y"]) == "-0.148x -0.021y -0.055"


def test_zero_weight_is_omitted():
    assert format_formula([0.0, 3.175], -1.0, ["x", "y"]) == "+3.175y -1.000"


def test_four_digit_coefficients_are_kept():
    assert format_formula([0.706, -0.6946], -0.463, ["x", "y"]) == "+0.706x -0.6946y -0.463"


def test_compact_style_zero_policy():
    assert format_formula([0.0, 0.0], 0.0, ["x", "y"]) == "+0.000"


def test_fixed_style_zero_policy():
    text = format_formula([0.0, 0.0], 0.0, ["x", "y"], FormulaStyle.FIXED)
    assert text == "+0.0000x +0.0000y +0.0000"


def test_negative_zero_prints_positive():
    assert format_coefficient(-0.00001) == "+0.000"
    assert format_coefficient(-0.00001, FormulaStyle.FIXED) == "+0.0000"


def test_rounds_to_four_digits():
    assert format_coefficient(1.234567, FormulaStyle.FIXED) == "+1.2346"
    assert format_coefficient(1.23456) == "+1.2346"


def test_label_count_must_match():
    with pytest.raises(ValueError):
        format_formula([1.0], 0.0, ["x", "y"])


def test_default_labels():
    assert default_labels(3) == ["s0", "s1", "s2"]


@pytest.mark.parametrize(
    "text, weights, bias",
    [
        ("3.175y-1.000", [0.0, 3.175], -1.0),
        ("-0.148x -0.021y -0.055", [-0.148, -0.021], -0.055),
        ("−0.148x −0.021y −0.055", [-0.148, -0.021], -0.055),
        ("0.706x-0.6946y-0.463", [0.706, -0.6946], -0.463),
        ("+0.0000x +0.0000y +0.0000", [0.0, 0.0], 0.0),
    ],
)
def test_parse(text, weights, bias):
    parsed_weights, parsed_bias = parse_formula(text, ["x", "y"])
    np.testing.assert_allclose(parsed_weights, weights)
    assert parsed_bias == pytest.approx(bias)


def test_parse_rejects_unknown_variable():
    with pytest.raises(ValueError, match="unknown variable"):
        parse_formula("1.0z+0.5", ["x", "y"])


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_formula("x*y", ["x", "y"])


@pytest.mark.parametrize("table, labels", [(SIMPLEGOAL_TABLE, ["x", "y"]), (MOUNTAINCAR_TABLE, ["x", "v"])])
def test_published_tables_parse(table, labels):
    for _, formulas in table:
        for text in formulas:
            weights, bias = parse_formula(text, labels)
            assert weights.shape == (2,)
            assert np.isfinite(bias)


@pytest.mark.parametrize("style", list(FormulaStyle))
@given(st.lists(coefficient, min_size=2, max_size=2), coefficient)
def test_property_round_trip_to_four_digits(style, weights, bias):
    text = format_formula(weights, bias, ["x", "v"], style)
    parsed_weights, parsed_bias = parse_formula(text, ["x", "v"])
    assert parsed_weights.tolist() == [round(w, 4) + 0.0 for w in weights]
    assert parsed_bias == round(bias, 4)
