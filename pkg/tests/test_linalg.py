import itertools

import pytest
from hypothesis import given, strategies as st

from deltaprism.coeff import CoeffRing
from deltaprism.dpoly import DeltaPoly, VarId, parse_poly
from deltaprism.errors import DegreeExceeded
from deltaprism.linalg import HowellBasis, SliceRing, kernel


def brute_span(rows, M, n):
    span = set()
    for coeffs in itertools.product(range(M), repeat=len(rows)):
        v = [0] * n
        for c, r in zip(coeffs, rows):
            for j in range(n):
                v[j] = (v[j] + c * r[j]) % M
        span.add(tuple(v))
    return span


def as_dict(v):
    return {i: x for i, x in enumerate(v) if x}


small_matrix = st.tuples(st.sampled_from([(2, 2), (2, 3), (3, 1), (3, 2)]), st.data())


@given(small_matrix)
def test_span_matches_enumeration(args):
    (p, N), data = args
    M, n = p ** N, 3
    rows = data.draw(st.lists(st.lists(st.integers(0, M - 1), min_size=n, max_size=n), max_size=3))
    hb = HowellBasis(p, N).extend(as_dict(r) for r in rows)
    span = brute_span(rows, M, n)
    assert p ** hb.length() == len(span)
    for v in itertools.product(range(M), repeat=n):
        assert hb.contains(as_dict(v)) == (v in span)


@given(small_matrix)
def test_reduction_is_canonical(args):
    (p, N), data = args
    M, n = p ** N, 3
    rows = data.draw(st.lists(st.lists(st.integers(0, M - 1), min_size=n, max_size=n), max_size=3))
    hb = HowellBasis(p, N).extend(as_dict(r) for r in rows)
    span = brute_span(rows, M, n)
    v = data.draw(st.lists(st.integers(0, M - 1), min_size=n, max_size=n))
    reps = {tuple(sorted(hb.reduce(as_dict([(a + b) % M for a, b in zip(v, s)])).items())) for s in span}
    assert len(reps) == 1


def test_pivots_are_prime_powers():
    hb = HowellBasis(2, 3).extend([{0: 6, 1: 3}, {0: 4}])
    for c, (e, row) in hb.rows.items():
        assert row[c] == 2 ** e


def test_howell_closure_row():
    # 2*(1, 1) in Z/4 has 2*(2, 2) = 0 but (0, 2) needs the extra row
    hb = HowellBasis(2, 2).extend([{0: 2, 1: 1}])
    assert hb.contains({1: 2})


@given(st.data())
def test_kernel_matches_enumeration(data):
    p, N = 2, 2
    M = p ** N
    images = data.draw(st.lists(st.lists(st.integers(0, M - 1), min_size=2, max_size=2), min_size=1, max_size=3))
    ker = kernel([as_dict(r) for r in images], None, p, N, 2)
    for coeffs in itertools.product(range(M), repeat=len(images)):
        total = [sum(c * r[j] for c, r in zip(coeffs, images)) % M for j in range(2)]
        assert ker.contains(as_dict(coeffs)) == (total == [0, 0])


def test_slice_ring_quotient():
    Z = CoeffRing.exact(2)
    x = VarId("x", 0)
    sl = SliceRing([x], [parse_poly("x^2 - 2", Z)], 3, 2, 2, weights={x: 1})
    # Z/4[x]/(x^2 - 2) in degree <= 3: 1, x, x^2 = 2, x^3 = 2x
    assert sl.normal_form(parse_poly("x^3", Z)) == parse_poly("2*x", CoeffRing.modular(2, 2))
    assert sl.length() == 4
    assert sl.dimension() == 2
    assert not sl.contains_one()
    with pytest.raises(DegreeExceeded):
        sl.vector(parse_poly("x^4", Z))
    with pytest.raises(ValueError):
        sl.vector(parse_poly("y", Z))


def test_unit_ideal_slice():
    Z = CoeffRing.exact(3)
    sl = SliceRing([VarId("x", 0)], [DeltaPoly.const(Z, 5)], 2, 2, 3)
    assert sl.contains_one() and sl.length() == 0
