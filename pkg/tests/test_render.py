from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs

from qlich.poly import Poly
from qlich.render import ParseError, parse_poly, parse_state, render_poly, render_state
from test_field_algebra import state


def test_parse_poly_examples():
    assert parse_poly("x1*x2", 2) == Poly(2, {(1, 1): 1})
    assert parse_poly("x1^2 + x2^2", 2) == Poly(2, {(2, 0): 1, (0, 2): 1})
    p = parse_poly("1/2*x1^2 - x2", 2)
    assert p == Poly(2, {(2, 0): Fraction(1, 2), (0, 1): -1})
    assert parse_poly(" x * y ", 2) == parse_poly("x1*x2", 2)
    assert parse_poly("(x1 - x2)^2", 2) == parse_poly("x1^2 - 2*x1*x2 + x2^2", 2)


@pytest.mark.parametrize(
    "text, pos",
    [("x1*+x2", 3), ("x3", 0), ("x1^-1", 3), ("(x1", 3), ("", 0), ("x1 x2", 3)],
)
def test_parse_poly_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as err:
        parse_poly(text, 2)
    assert err.value.pos == pos


def test_render_state_examples():
    assert render_state(parse_state("g1*g2*c2", 2)) == "g1*g2*c2"
    assert render_state(parse_state("D1 g1", 2)) == "D1 g1"
    assert render_state(parse_state("-c1*c2 + h*b1", 2)) == "-c1*c2 + h*b1"
    assert render_state(parse_state("c2*c1", 2)) == "-c1*c2"
    assert render_state(parse_state("0", 2)) == "0"


def test_parse_state_rejects_unknown_letter():
    with pytest.raises(ParseError):
        parse_state("q1", 2)
    with pytest.raises(ParseError):
        parse_state("c3", 2)


polys = hs.dictionaries(
    hs.tuples(hs.integers(0, 3), hs.integers(0, 3)),
    hs.fractions(min_value=-5, max_value=5, max_denominator=4),
    max_size=5,
).map(lambda d: Poly(2, d))


@settings(max_examples=80, deadline=None)
@given(polys)
def test_poly_round_trip(p):
    assert parse_poly(render_poly(p), 2) == p


@settings(max_examples=80, deadline=None)
@given(state())
def test_state_round_trip(s):
    assert parse_state(render_state(s), 2) == s
