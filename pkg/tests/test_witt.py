import itertools

import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import exact, polys, to_sympy
from deltaprism.coeff import CoeffRing
from deltaprism.delta_ops import DeltaContext
from deltaprism.dpoly import DeltaPoly, parse_poly
from deltaprism.errors import LengthTooShort
from deltaprism.witt import (
    FiniteField, WittVector, build_table, delta_to_section, fiber_sequence_check, from_integer, frobenius_w, ghost,
    perfectness_check, teichmuller, truncate, verschiebung, witt_add, witt_mul, witt_reconstruction_check,
)

Z2 = exact(2)


def sympy_tables(p, n):
    # ghost inversion done independently in sympy
    a = sympy.symbols(f"a0:{n}")
    b = sympy.symbols(f"b0:{n}")

    def w(v, k):
        return sum(p ** i * v[i] ** (p ** (k - i)) for i in range(k + 1))

    def invert(targets):
        out = []
        for k, t in enumerate(targets):
            rest = sum(p ** i * out[i] ** (p ** (k - i)) for i in range(k))
            out.append(sympy.expand((t - rest) / p ** k))
        return out

    return (invert([w(a, k) + w(b, k) for k in range(n)]),
            invert([sympy.expand(w(a, k) * w(b, k)) for k in range(n)]))


def table_as_sympy(f):
    # table variables are a0@0, b1@0, ...; map to sympy a0, b1
    return to_sympy(f).xreplace({s: sympy.Symbol(str(s)[:-2]) for s in to_sympy(f).free_symbols})


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (3, 2), (3, 3)])
def test_tables_match_sympy_ghost_inversion(p, n):
    table = build_table(p, n)
    sums, prods = sympy_tables(p, n)
    for ours, theirs in zip(table.sum_polys, sums):
        assert sympy.expand(table_as_sympy(ours) - theirs) == 0
    for ours, theirs in zip(table.prod_polys, prods):
        assert sympy.expand(table_as_sympy(ours) - theirs) == 0


def test_low_components():
    t = build_table(2, 2)
    assert t.sum_polys[0] == parse_poly("a0 + b0", Z2)
    assert t.sum_polys[1] == parse_poly("a1 + b1 - a0*b0", Z2)
    assert t.prod_polys[1] == parse_poly("a0^2*b1 + b0^2*a1 + 2*a1*b1", Z2)


def test_integer_vectors():
    Z = CoeffRing.exact(2)
    one0 = WittVector(2, (Z(1), Z(0)))
    assert witt_add(one0, one0) == WittVector(2, (Z(2), Z(-1)))
    zero = WittVector(2, (Z(0), Z(0)))
    w = WittVector(2, (Z(5), Z(-3)))
    assert witt_add(w, zero) == w


def test_teichmuller_is_multiplicative():
    x, y = parse_poly("x", Z2), parse_poly("y", Z2)
    for p in (2, 3):
        assert witt_mul(teichmuller(x, 2, 3), teichmuller(y, 2, 3)) == teichmuller(x * y, 2, 3)


def test_verschiebung_and_frobenius():
    Z = CoeffRing.exact(2)
    assert verschiebung(WittVector(2, (Z(1), Z(1)))) == WittVector(2, (Z(0), Z(1)))
    assert frobenius_w(WittVector(2, (Z(1), Z(0)))) == WittVector(2, (Z(1),))
    with pytest.raises(LengthTooShort):
        frobenius_w(WittVector(2, (Z(1),)))
    x = parse_poly("x", Z2)
    assert frobenius_w(teichmuller(x, 2, 3)) == teichmuller(x ** 2, 2, 2)


def vectors(p, n):
    return st.lists(polys(exact(p), max_terms=2, max_level=0), min_size=n, max_size=n).map(
        lambda cs: WittVector(p, tuple(cs)))


@pytest.mark.parametrize("p,n", [(2, 3), (3, 2)])
@given(data=st.data())
def test_ghost_is_a_ring_map(p, n, data):
    u, v = data.draw(vectors(p, n)), data.draw(vectors(p, n))
    assert ghost(witt_add(u, v)) == [a + b for a, b in zip(ghost(u), ghost(v))]
    assert ghost(witt_mul(u, v)) == [a * b for a, b in zip(ghost(u), ghost(v))]


@pytest.mark.parametrize("p", [2, 3])
@given(data=st.data())
def test_ghost_shifts(p, data):
    w = data.draw(vectors(p, 3))
    gv, g, gf = ghost(verschiebung(w)), ghost(w), ghost(frobenius_w(w))
    assert gv[0].is_zero()
    assert all(gv[i] == g[i - 1].scale(p) for i in range(1, 3))
    assert all(gf[i] == g[i + 1] for i in range(2))


@given(vectors(2, 3))
def test_frobenius_after_verschiebung_is_p(w):
    # F∘V on W_3 lands in W_2 and equals p·truncate(w)
    short = truncate(w, 2)
    assert frobenius_w(verschiebung(w)) == witt_mul(from_integer(2, short), short)


@given(polys(Z2), polys(Z2))
def test_section_is_a_ring_map(f, g):
    ctx = DeltaContext(Z2, 3)
    s = lambda h: delta_to_section(ctx, h)
    assert s(f + g) == witt_add(s(f), s(g))
    assert s(f * g) == witt_mul(s(f), s(g))


def test_section_examples():
    ctx = DeltaContext(Z2, 3)
    x, y = parse_poly("x", Z2), parse_poly("y", Z2)
    assert delta_to_section(ctx, x) == WittVector(2, (x, parse_poly("x@1", Z2)))
    assert delta_to_section(ctx, DeltaPoly.const(Z2, 5)).components[1] == DeltaPoly.const(Z2, (5 - 25) // 2)
    assert delta_to_section(ctx, x + y).components[1] == parse_poly("x@1 + y@1 - x*y", Z2)


@pytest.mark.parametrize("p", [2, 3])
def test_w2_of_prime_field_is_z_mod_p2(p):
    # (a0, a1) corresponds to [a0] + p[a1] with [a] = a^p mod p^2
    F = FiniteField.of_order(p)
    els = F.elements()

    def to_int(w):
        a0, a1 = (c.coeffs[0] if c.coeffs else 0 for c in w.components)
        return (pow(a0, p, p * p) + p * pow(a1, p, p * p)) % (p * p)

    vecs = [WittVector(p, c) for c in itertools.product(els, repeat=2)]
    assert len({to_int(w) for w in vecs}) == p * p
    for u, v in itertools.product(vecs, repeat=2):
        assert to_int(witt_add(u, v)) == (to_int(u) + to_int(v)) % (p * p)
        assert to_int(witt_mul(u, v)) == to_int(u) * to_int(v) % (p * p)


@pytest.mark.parametrize("q,n", [(2, 2), (4, 2), (2, 1), (4, 1), (3, 2)])
def test_perfectness(q, n):
    assert perfectness_check(q, n)


@pytest.mark.parametrize("n,q", [(2, 2), (2, 4), (3, 2)])
def test_reconstruction(n, q):
    assert witt_reconstruction_check(n, q)


def test_fiber_sequence():
    assert fiber_sequence_check(2, 2, 3)
