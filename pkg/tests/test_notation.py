import pytest
from hypothesis import given

from hnpoly.notation import (PolyParseError, format_poly, parse_poly, poly_from_json, poly_to_json)
from hnpoly.poly import Poly
from hnpoly.scalars import GF, QQ, QQI

from strategies import polys


def test_grammar_examples():
    P = parse_poly("(3/2+1/2i)*z1^2*z2 + z3")
    assert P.n == 3 and P.ring is QQI
    assert P.coefficient((2, 1, 0)) == QQI.parse("3/2+1/2i")
    assert parse_poly("4*z1^2 + 3*z2", ring=GF(7)).coefficient((2, 0)) == GF(7)(4)
    assert parse_poly("z1**2") == parse_poly("z1^2")


def test_parse_error_position():
    with pytest.raises(PolyParseError) as err:
        parse_poly("z1 + * z2")
    assert err.value.pos == 5


def test_division_by_variable_rejected():
    with pytest.raises(PolyParseError):
        parse_poly("1/z1")


def test_t_variable():
    P = parse_poly("t*z1^2", 1, t_var=True)
    assert P.n == 2 and P.coefficient((2, 1)) == 1


def test_json_schema_shape():
    obj = poly_to_json(parse_poly("(3/2+1/2i)*z1^2*z2 + z3"))
    assert obj["n"] == 3 and obj["ring"] == "QI"
    assert {"exp": [2, 1, 0], "re": "3/2", "im": "1/2"} in obj["terms"]


@given(polys(max_degree=4))
def test_text_roundtrip(P):
    assert parse_poly(format_poly(P), P.n, P.ring) == P


@given(polys(max_degree=4))
def test_json_roundtrip(P):
    assert poly_from_json(poly_to_json(P)) == P


def test_zero_prints():
    assert format_poly(Poly(2, QQ)) == "0"
    assert parse_poly("0", 2) == Poly(2, QQ)
