import pytest
from hypothesis import given, strategies as st

from conftest import polys
from deltaprism.coeff import CoeffRing
from deltaprism.delta_ops import delta, delta_power
from deltaprism.dpoly import DeltaPoly, deg_delta, parse_poly
from deltaprism.errors import DegreeExceeded, DepthExceeded, NotRegular, ParseError
from deltaprism.prism import (
    DeltaPresentation, Prism, base_change_check, check_distinguished, envelope_regular, gamma_map,
    parse_prism_spec, projection_well_defined,
)
from deltaprism.suites import divided_power_dimension

Z2 = CoeffRing.exact(2)


def crystalline(p=2, depth=2, degree=4, precision=2):
    zero = DeltaPoly.zero(CoeffRing.exact(p))
    A = DeltaPresentation.free(p, ["x"], explicit={"x": zero}, depth=depth, degree=degree, precision=precision)
    return Prism(A, DeltaPoly.const(CoeffRing.exact(p), p))


def crystalline_env(p=2, depth=2, degree=4, precision=2):
    prism = crystalline(p, depth, degree, precision)
    return envelope_regular(prism, [prism.A.element("x")])


def test_distinguished_examples():
    Z = DeltaPresentation.free(2, [], depth=2, degree=4, precision=3)
    assert check_distinguished(Z, Z.element("2"))
    assert not check_distinguished(Z, Z.element("1"))
    assert not check_distinguished(Z, Z.element("4"))
    for u in (1, 3, 5):
        assert check_distinguished(Z, DeltaPoly.const(Z2, 2 * u))
    Z3 = DeltaPresentation.free(3, [], depth=2, degree=4, precision=3)
    assert check_distinguished(Z3, Z3.element("3"))
    assert not check_distinguished(Z3, Z3.element("9"))


@pytest.mark.parametrize("p", [2, 3])
def test_q_de_rham_is_distinguished(p):
    ring = CoeffRing.exact(p)
    A = DeltaPresentation.free(p, ["q"], explicit={"q": DeltaPoly.zero(ring)}, depth=2, degree=8, precision=2)
    d = sum((A.element("q") ** i for i in range(1, p)), A.element("1"))
    assert check_distinguished(A, d)
    assert not check_distinguished(A, A.element("q - 1"))


def test_gamma_map():
    prism = crystalline()
    x = prism.A.element("x")
    assert gamma_map(prism, x, {"x": "y"}) == parse_poly("2*y", Z2)
    assert gamma_map(prism, DeltaPoly.const(Z2, 7), {"x": "y"}) == DeltaPoly.const(Z2, 7)
    # free x: δ(x) -> δ(2y) = 4 y@1 + δ(2) y^2 + 2 δ(2) y@1 with δ(2) = -1
    free = Prism(DeltaPresentation.free(2, ["x"], depth=2), DeltaPoly.const(Z2, 2))
    assert gamma_map(free, parse_poly("x@1", Z2), {"x": "y"}) == parse_poly("2*y@1 - y^2", Z2)


def test_empty_sequence_gives_base():
    prism = crystalline()
    env = envelope_regular(prism, [])
    base = prism.A.slice()
    assert env.slice_dimension() == base.dimension()
    assert env.normal_form("x^3 + 1") == parse_poly("x^3 + 1", CoeffRing.modular(2, 2))
    assert not env.torsion_unchecked


def test_sequence_equal_to_d():
    prism = crystalline()
    env = envelope_regular(prism, [prism.d])
    assert env.normal_form("y") == env.normal_form("1")


def test_crystalline_relations():
    env = crystalline_env()
    assert env.normal_form("2*y - x").is_zero()
    assert env.equal("x^2", "4*y^2")
    ctx = env.presentation.ctx
    r = env.relations[0]
    assert env.normal_form(delta(r, ctx)).is_zero()
    assert env.torsion_unchecked


@pytest.mark.parametrize("p,D", [(2, d) for d in range(5)] + [(3, d) for d in range(7)])
def test_divided_power_profile(p, D):
    env = crystalline_env(p, depth=3, degree=D, precision=1)
    assert env.slice_dimension() == divided_power_dimension(p, D)


def test_divided_power_oracle_values():
    # F_2<x> has exactly one basis element γ_n in each weight n
    assert [divided_power_dimension(2, D) for D in range(5)] == [1, 2, 3, 4, 5]


def test_non_regular_sequence_is_rejected():
    prism = crystalline()
    x = prism.A.element("x")
    with pytest.raises(NotRegular):
        envelope_regular(prism, [x, x])


def test_degree_and_depth_errors():
    env = crystalline_env()
    with pytest.raises(DegreeExceeded):
        env.normal_form("y^5")
    with pytest.raises(DepthExceeded):
        delta_power(env.element("y"), 3, env.presentation.ctx)


def test_report():
    rep = crystalline_env().report()
    assert rep["params"] == {"p": 2, "N": 2, "K": 2, "D": 4}
    assert rep["generators"] == ["x", "y"]
    assert rep["relations"] == [[["-1", [["x", 0, 1]]], ["2", [["y", 0, 1]]]]]
    assert rep["distinguished"] is True
    assert {"slice_dimension", "slice_length", "torsion_unchecked"} <= set(rep)


def test_delta_stability_below_top():
    env = crystalline_env(depth=3, degree=8)
    ctx = env.presentation.ctx
    K = env.depth
    for i, r in enumerate(env.closed):
        if i % K < K - 1:
            dr = delta(r, ctx)
            if deg_delta(dr) <= env.degree:
                assert env.normal_form(dr).is_zero()


def test_monotone_refinement():
    small = crystalline_env(depth=2, degree=3, precision=1)
    assert projection_well_defined(crystalline_env(depth=3, degree=4, precision=2), small)
    assert projection_well_defined(crystalline_env(depth=2, degree=4, precision=1), small)


def test_base_change():
    prism = crystalline()
    x = prism.A.element("x")
    assert base_change_check(prism, prism, {"x": x}, [x])
    zero = DeltaPoly.zero(Z2)
    B = DeltaPresentation.free(2, ["x", "u"], explicit={"x": zero, "u": zero}, depth=2, degree=4, precision=2)
    assert base_change_check(prism, Prism(B, prism.d), {"x": x}, [x])


def test_base_change_rejects_non_delta_map():
    prism = crystalline()
    B = DeltaPresentation.free(2, ["u"], depth=2, degree=4, precision=2)
    with pytest.raises(ValueError):
        base_change_check(prism, Prism(B, prism.d), {"x": B.element("u")}, [prism.A.element("x")])


def slice_elements():
    xs = polys(Z2, symbols=("x",), max_level=0, max_exp=2, max_terms=2)
    ys = polys(Z2, symbols=("y",), max_level=1, max_exp=1, max_terms=2)
    return st.tuples(xs, ys).map(lambda t: t[0] * t[1] + t[0])


ENV = crystalline_env()


@given(slice_elements())
def test_normal_form_idempotent(f):
    if deg_delta(f) <= ENV.degree:
        nf = ENV.normal_form(f)
        assert ENV.normal_form(nf) == nf


@given(slice_elements(), slice_elements())
def test_normal_form_ring_compatible(f, g):
    if max(deg_delta(f), deg_delta(g)) > ENV.degree:
        return
    nf, ng = ENV.normal_form(f).lift(), ENV.normal_form(g).lift()
    assert ENV.normal_form(f + g) == ENV.normal_form(nf + ng)
    if deg_delta(f * g) <= ENV.degree and deg_delta(nf * ng) <= ENV.degree:
        assert ENV.normal_form(f * g) == ENV.normal_form(nf * ng)


SPEC = """
# crystalline
prime = 2
precision = 2
depth = 2
degree = 4
generator x = 0
generator t = free
relation = t^2 - t
distinguished = 2
"""


def test_spec_file():
    spec = parse_prism_spec(SPEC)
    assert spec.prime == 2 and spec.generators == ["x", "t"]
    prism = spec.prism(spec.depth, spec.degree, spec.precision)
    assert prism.is_distinguished()
    assert prism.A.ctx.is_free("t") and not prism.A.ctx.is_free("x")


@pytest.mark.parametrize("text", [
    "prime = 2",
    "distinguished = 2",
    "prime = two\ndistinguished = 2",
    "prime = 2\ndistinguished = 2\ncolour = red",
    "prime = 2\ndistinguished = 2\ngenerator x = 0\ngenerator x = free",
    "prime 2",
])
def test_bad_spec_files(text):
    with pytest.raises(ParseError):
        parse_prism_spec(text)


def test_sequence_outside_presentation():
    prism = crystalline()
    with pytest.raises(DepthExceeded):
        envelope_regular(prism, [parse_poly("x@1", Z2)])
