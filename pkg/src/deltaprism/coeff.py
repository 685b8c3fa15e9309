"""Scalar arithmetic: exact integers or Z/p^N with the precision carried by the ring."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotAUnit, NotDivisible, PrecisionExhausted, RingMismatch


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def valuation(value: int, p: int, cap: int | None = None) -> int:
    """p-adic valuation of an integer; ``cap`` is returned for zero."""
    if value == 0:
        if cap is None:
            raise ValueError("valuation of zero needs a cap")
        return cap
    v = 0
    while value % p == 0:
        value //= p
        v += 1
        if cap is not None and v >= cap:
            return cap
    return v


@dataclass(frozen=True)
class CoeffRing:
    """Either Z (``precision is None``) or Z/p^N.

    The prime is kept in exact mode too: it drives δ-degrees and the δ formulas.
    """

    p: int
    precision: int | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.precision is not None and self.precision < 1:
            raise ValueError("precision must be >= 1")

    @classmethod
    def exact(cls, p: int) -> "CoeffRing":
        return cls(p, None)

    @classmethod
    def modular(cls, p: int, precision: int) -> "CoeffRing":
        return cls(p, precision)

    @property
    def is_exact(self) -> bool:
        return self.precision is None

    @property
    def modulus(self) -> int | None:
        return None if self.precision is None else self.p ** self.precision

    def normalize(self, value: int) -> int:
        if self.precision is None:
            return value
        return value % self.p ** self.precision

    def lifted(self) -> "CoeffRing":
        return CoeffRing(self.p)

    def with_precision(self, precision: int) -> "CoeffRing":
        if precision < 1:
            raise PrecisionExhausted(f"precision would drop to {precision}")
        return CoeffRing(self.p, precision)

    def __call__(self, value) -> "Coeff":
        if isinstance(value, Coeff):
            value = value.value
        return Coeff(self.normalize(int(value)), self)

    def __str__(self):
        if self.precision is None:
            return f"Z (p={self.p})"
        return f"Z/{self.p}^{self.precision}"


@dataclass(frozen=True)
class Coeff:
    value: int
    ring: CoeffRing

    def _other(self, other) -> int:
        if isinstance(other, Coeff):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def _make(self, value: int) -> "Coeff":
        return Coeff(self.ring.normalize(value), self.ring)

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._make(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._make(self.value - o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._make(o - self.value)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._make(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._make(-self.value)

    def __pow__(self, k: int):
        if k < 0:
            return inv(self) ** (-k)
        if self.ring.modulus is None:
            return Coeff(self.value ** k, self.ring)
        return Coeff(pow(self.value, k, self.ring.modulus), self.ring)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == self.ring.normalize(other)
        if isinstance(other, Coeff):
            return self.ring == other.ring and self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.ring))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Coeff({self.value}, {self.ring})"

    def __str__(self):
        return str(self.value)


def add(a: Coeff, b: Coeff) -> Coeff:
    return a + b


def sub(a: Coeff, b: Coeff) -> Coeff:
    return a - b


def mul(a: Coeff, b: Coeff) -> Coeff:
    return a * b


def neg(a: Coeff) -> Coeff:
    return -a


def divp(a: Coeff, k: int) -> Coeff:
    """Divide by p^k. In Z/p^N the quotient only survives modulo p^(N-k)."""
    ring = a.ring
    pk = ring.p ** k
    if ring.is_exact:
        if a.value % pk:
            raise NotDivisible(f"{ring.p}^{k} does not divide {a.value}")
        return Coeff(a.value // pk, ring)
    if k >= ring.precision:
        raise PrecisionExhausted(f"dividing by {ring.p}^{k} in {ring}")
    if a.value % pk:
        raise NotDivisible(f"{ring.p}^{k} does not divide {a.value} in {ring}")
    target = ring.with_precision(ring.precision - k)
    return target(a.value // pk)


def inv(a: Coeff) -> Coeff:
    """Inverse of a unit by Newton lifting of the inverse mod p."""
    ring = a.ring
    p = ring.p
    if a.value % p == 0:
        raise NotAUnit(f"{a.value} is divisible by {p}")
    if ring.is_exact:
        if a.value in (1, -1):
            return a
        raise NotAUnit(f"{a.value} is not invertible in Z")
    modulus = ring.modulus
    x = pow(a.value % p, -1, p)
    prec = 1
    while prec < ring.precision:
        prec = min(2 * prec, ring.precision)
        m = p ** prec
        x = x * (2 - a.value * x) % m
    return Coeff(x % modulus, ring)
