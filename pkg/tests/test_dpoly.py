import pytest
import sympy
from hypothesis import given

from conftest import exact, polys, to_sympy
from deltaprism.coeff import CoeffRing
from deltaprism.dpoly import (
    D, Add, DeltaPoly, Mul, Num, Pow, Var, deg_delta, format_poly, from_json, parse, parse_poly, to_json,
)
from deltaprism.errors import ParseError, RingMismatch

Z2, Z3 = exact(2), exact(3)


def test_parse_tree():
    assert parse("x^2 + 3*y@1") == Add(((1, Pow(Var("x", 0), 2)), (1, Mul((Num(3), Var("y", 1))))))
    assert parse("D(x*y)") == D(Mul((Var("x"), Var("y"))))
    assert parse(" x @ 2 ") == Var("x", 2)


@pytest.mark.parametrize("text", ["x@@", "x +", "(x", "x^", "3 3", ""])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse(text)


def test_parse_error_reports_position():
    with pytest.raises(ParseError, match="position 2"):
        parse("x@@")


def test_ring_operations():
    x, y = DeltaPoly.var(Z2, "x"), DeltaPoly.var(Z2, "y")
    assert (x + y) * (x - y) == x ** 2 - y ** 2
    R = CoeffRing.modular(2, 2)
    two_x = DeltaPoly.var(R, "x").scale(2)
    assert (two_x * two_x).is_zero()
    assert format_poly(DeltaPoly.var(Z2, "x", 1) ** 3) == "x@1^3"


def test_ring_mismatch():
    with pytest.raises(RingMismatch):
        DeltaPoly.var(Z2, "x") + DeltaPoly.var(CoeffRing.modular(2, 3), "x")


def test_deg_delta():
    assert deg_delta(parse_poly("x@1", Z2)) == 2
    assert deg_delta(parse_poly("7", Z2)) == 0
    assert deg_delta(parse_poly("x^2*y@1", Z3)) == 5
    assert deg_delta(DeltaPoly.zero(Z2)) == float("-inf")


def test_printing():
    assert format_poly(parse_poly("x^2 - y^2", Z2)) == "x^2 - y^2"
    assert format_poly(DeltaPoly.zero(Z2)) == "0"
    assert format_poly(parse_poly("x@1*x", Z2)) == "x*x@1"
    assert format_poly(parse_poly("-3 + x", Z2)) == "x - 3"


def test_leading_minus_parses():
    assert parse_poly("-x + 2", Z2) == DeltaPoly.const(Z2, 2) - DeltaPoly.var(Z2, "x")


def test_json_encoding():
    f = parse_poly("2*x^2*x@1 - 1", Z2)
    assert to_json(f) == [["2", [["x", 0, 2], ["x", 1, 1]]], ["-1", []]]
    assert from_json(to_json(f), Z2) == f


def test_canonical_representation():
    a = parse_poly("y + x*y@1 + 3", Z2)
    b = parse_poly("3 + y@1*x + y", Z2)
    assert a == b and to_json(a) == to_json(b) and hash(a) == hash(b)


@given(polys(Z2), polys(Z2))
def test_multiplication_matches_sympy(f, g):
    assert to_sympy(f * g) == sympy.expand(to_sympy(f) * to_sympy(g))
    assert to_sympy(f + g) == sympy.expand(to_sympy(f) + to_sympy(g))


@given(polys(Z3, max_terms=5, coeff=100))
def test_print_parse_round_trip(f):
    assert parse_poly(format_poly(f), Z3) == f


@given(polys(Z2), polys(Z2))
def test_degree_of_product_is_additive(f, g):
    if f.is_zero() or g.is_zero():
        return
    assert deg_delta(f * g) == deg_delta(f) + deg_delta(g)


@given(polys(Z3), polys(Z3))
def test_degree_of_sum_is_bounded(f, g):
    assert deg_delta(f + g) <= max(deg_delta(f), deg_delta(g))


@given(polys(CoeffRing.modular(2, 3)), polys(CoeffRing.modular(2, 3)))
def test_modular_reduction_is_a_homomorphism(f, g):
    R = CoeffRing.modular(2, 3)
    assert (f.lift() * g.lift()).reduce(R) == f * g
