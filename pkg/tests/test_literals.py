from fractions import Fraction

import pytest

from tropell.errors import ParseError
from tropell.literals import parse_expression, parse_model, parse_series
from tropell.puiseux import PuiseuxSeries


def test_series_grammar():
    assert parse_series("1 - 2*t^(1/2) + t^3") == PuiseuxSeries(
        {0: 1, Fraction(1, 2): -2, 3: 1})
    assert parse_series("(1 + t)^2") == PuiseuxSeries({0: 1, 1: 2, 2: 1})
    assert parse_series("t^(-1/2)") == PuiseuxSeries({Fraction(-1, 2): 1})
    assert parse_series("3/4*t + O(t^2)") == PuiseuxSeries({1: Fraction(3, 4)}, 2)


def test_expression_with_variables():
    poly = parse_expression("x^2*y + x*y + x*y^2 + t^3")
    assert poly[(("x", 2), ("y", 1))] == 1
    assert poly[()] == parse_series("t^3")
    assert poly[(("x", 1), ("y", 2))] == 1


def test_negative_variable_exponent():
    poly = parse_expression("x^-1 + t^2")
    assert poly[(("x", -1),)] == 1


@pytest.mark.parametrize("text,pos", [("1 + ", 4), ("t^", 2), ("2 * * t", 4), ("(1 + t", 6),
                                      ("1 $ t", 2)])
def test_parse_error_positions(text, pos):
    with pytest.raises(ParseError) as info:
        parse_series(text)
    assert info.value.position == pos


def test_series_rejects_variables():
    with pytest.raises(ParseError):
        parse_series("x + 1")


def test_model_literal():
    coeffs = parse_model("[0,1,0,-2*t,t^2]")
    assert coeffs[3] == parse_series("-2*t")
    assert len(coeffs) == 5


def test_model_literal_nested_commas_and_positions():
    with pytest.raises(ParseError) as info:
        parse_model("[0,1,0,1+*t,t]")
    assert info.value.position == 9
    with pytest.raises(ParseError):
        parse_model("[0,1,0]")
    with pytest.raises(ParseError):
        parse_model("0,1,0,0,0")
