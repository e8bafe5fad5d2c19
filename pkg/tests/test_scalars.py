from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import nonzero_rationals, quad_values, rationals
from mdlie.scalars import (
    QuadExt,
    field_d,
    format_scalar,
    parse_scalar,
    parse_vector,
    quad,
    sign,
    sqrt_rational,
    squarefree_part,
)

scalars = st.one_of(rationals, quad_values(2))


def test_quad_collapses_to_rational():
    assert quad(3, 0, 2) == Fraction(3)
    assert isinstance(quad(3, 0, 2), Fraction)
    assert quad(1, 2, 4) == Fraction(5)
    assert quad(1, 1, 0) == Fraction(1)


def test_quad_pulls_square_factors():
    x = quad(0, 1, 8)
    assert isinstance(x, QuadExt)
    assert (x.a, x.b, x.d) == (0, 2, 2)


def test_squarefree_part():
    assert squarefree_part(12) == (3, 2)
    assert squarefree_part(1) == (1, 1)
    assert squarefree_part(50) == (2, 5)


def test_sqrt_rational():
    r = sqrt_rational(Fraction(1, 2))
    assert r * r == Fraction(1, 2)
    assert sqrt_rational(Fraction(9, 4)) == Fraction(3, 2)
    with pytest.raises(ValueError):
        sqrt_rational(-1)


def test_mixing_fields_is_an_error():
    with pytest.raises(ValueError):
        quad(0, 1, 2) + quad(0, 1, 3)
    with pytest.raises(ValueError):
        field_d([quad(0, 1, 2), quad(0, 1, 5)])


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        quad(1, 1, 2) / Fraction(0)


def test_sign_of_irrational():
    assert sign(quad(1, -1, 2)) == -1  # 1 - 1.414...
    assert sign(quad(-1, 1, 2)) == 1
    assert sign(quad(3, -2, 2)) == 1  # 3 - 2.828...
    assert quad(1, 1, 2) > Fraction(2)


@given(scalars, scalars, scalars)
def test_associativity(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)


@given(scalars, scalars, scalars)
def test_distributivity(a, b, c):
    assert a * (b + c) == a * b + a * c


@given(st.one_of(nonzero_rationals, quad_values(3).filter(bool)))
def test_inverse(a):
    assert a * (1 / a) == 1


@given(scalars)
def test_format_parse_round_trip(x):
    s = format_scalar(x)
    assert parse_scalar(s) == x
    assert format_scalar(parse_scalar(s)) == s  # canonical form is idempotent


def test_parse_forms():
    assert parse_scalar("-3/6") == Fraction(-1, 2)
    assert parse_scalar("sqrt(2)") == quad(0, 1, 2)
    assert parse_scalar("1-1/2*sqrt(2)") == quad(1, Fraction(-1, 2), 2)
    assert parse_scalar("-sqrt(8)") == quad(0, -2, 2)
    with pytest.raises(ValueError):
        parse_scalar("1.5")
    with pytest.raises(ValueError):
        parse_scalar("1/0")
    with pytest.raises(ValueError):
        parse_scalar("sqrt(3)", d=2)


def test_parse_vector():
    v = parse_vector("0,0,1,1+1*sqrt(2),0")
    assert v[3] == quad(1, 1, 2)
    assert len(v) == 5
    with pytest.raises(ValueError):
        parse_vector("1,,2")


def test_no_float_constructor_path():
    with pytest.raises(TypeError):
        format_scalar(0.5)
