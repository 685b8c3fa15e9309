import random

import pytest
from hypothesis import given, strategies as st

from deltaprism.coeff import CoeffRing, divp, inv
from deltaprism.errors import NotAUnit, NotDivisible, PrecisionExhausted, RingMismatch


def test_modular_add_wraps():
    R = CoeffRing.modular(2, 4)
    assert R(9) + R(9) == R(2)


def test_exact_mul():
    Z = CoeffRing.exact(2)
    assert (Z(7) * Z(-3)).value == -21


def test_modular_mul():
    R = CoeffRing.modular(3, 2)
    assert (R(5) * R(4)).value == 2


def test_divp_lowers_precision():
    q = divp(CoeffRing.modular(2, 4)(12), 2)
    assert q.value == 3
    assert q.ring == CoeffRing.modular(2, 2)


def test_divp_exact():
    assert divp(CoeffRing.exact(3)(27), 3).value == 1


def test_divp_errors():
    with pytest.raises(NotDivisible):
        divp(CoeffRing.modular(2, 4)(6), 2)
    with pytest.raises(PrecisionExhausted):
        divp(CoeffRing.modular(2, 2)(0), 2)


def test_inverse():
    # 3 * 11 = 33 = 2*16 + 1
    assert inv(CoeffRing.modular(2, 4)(3)).value == 11
    assert inv(CoeffRing.modular(3, 2)(1)).value == 1
    with pytest.raises(NotAUnit):
        inv(CoeffRing.modular(2, 4)(6))


def test_ring_mismatch():
    with pytest.raises(RingMismatch):
        CoeffRing.modular(2, 4)(1) + CoeffRing.modular(2, 3)(1)


def test_bad_rings():
    with pytest.raises(ValueError):
        CoeffRing(4)
    with pytest.raises(ValueError):
        CoeffRing(2, 0)


@given(st.integers(-10**6, 10**6), st.integers(0, 6), st.sampled_from([2, 3, 5]))
def test_divp_undoes_multiplication(a, k, p):
    Z = CoeffRing.exact(p)
    assert divp(Z(a) * p ** k, k) == Z(a)


@given(st.integers(), st.sampled_from([2, 3]), st.integers(1, 6))
def test_inverse_of_units(a, p, N):
    R = CoeffRing.modular(p, N)
    a = a * p + 1 if a % p == 0 else a
    assert R(a) * inv(R(a)) == R(1)


@given(st.lists(st.tuples(st.integers(-10**9, 10**9), st.integers(-10**9, 10**9)), min_size=1, max_size=20),
       st.sampled_from([2, 3]), st.integers(1, 4))
def test_modular_matches_exact(pairs, p, N):
    R, Z = CoeffRing.modular(p, N), CoeffRing.exact(p)
    M = p ** N
    for a, b in pairs:
        assert (R(a) + R(b)).value == (Z(a) + Z(b)).value % M
        assert (R(a) - R(b)).value == (Z(a) - Z(b)).value % M
        assert (R(a) * R(b)).value == (Z(a) * Z(b)).value % M
        assert (-R(a)).value == (-Z(a)).value % M


def test_modular_matches_exact_thousand_pairs():
    rng = random.Random(0)
    for p, N in ((2, 4), (3, 3)):
        R, M = CoeffRing.modular(p, N), p ** N
        for _ in range(1000):
            a, b = rng.randrange(-10**12, 10**12), rng.randrange(-10**12, 10**12)
            assert (R(a) * R(b)).value == a * b % M
            assert (R(a) + R(b)).value == (a + b) % M
