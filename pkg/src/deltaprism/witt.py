"""Truncated p-typical Witt vectors.

The universal sum, product and Frobenius polynomials are found once per
(p, n) by ghost inversion over exact integers and then evaluated on
components of any ring: ints, :class:`Coeff`, :class:`DeltaPoly` or
finite-field elements.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .coeff import Coeff, CoeffRing
from .delta_ops import DeltaContext, delta
from .dpoly import DeltaPoly, VarId
from .errors import DivisionNotExact, LengthTooShort, RingMismatch


def _unit_like(x):
    if isinstance(x, DeltaPoly):
        return DeltaPoly.const(x.ring, 1)
    if isinstance(x, Coeff):
        return x.ring(1)
    if isinstance(x, int):
        return 1
    return x ** 0


def _ring_of(x):
    if isinstance(x, (DeltaPoly, Coeff)):
        return x.ring
    if isinstance(x, int):
        return int
    return getattr(x, "field", type(x))


@dataclass(frozen=True)
class WittVector:
    p: int
    components: tuple

    def __post_init__(self):
        if not self.components:
            raise ValueError("a Witt vector needs at least one component")
        rings = {_ring_of(c) for c in self.components}
        if len(rings) > 1:
            raise RingMismatch("Witt components live in different rings")

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def base(self):
        return _ring_of(self.components[0])

    def __getitem__(self, i):
        return self.components[i]

    def __add__(self, other):
        return witt_add(self, other)

    def __mul__(self, other):
        return witt_mul(self, other)

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.components) + ")"


@dataclass(frozen=True)
class WittPolynomialTable:
    p: int
    n: int
    sum_polys: tuple
    prod_polys: tuple


def _a(ring, k):
    return DeltaPoly.var(ring, f"a{k}")


def _b(ring, k):
    return DeltaPoly.var(ring, f"b{k}")


def _ghost_poly(comps: Sequence[DeltaPoly], k: int, p: int) -> DeltaPoly:
    return sum((c ** (p ** (k - i))).scale(p ** i) for i, c in enumerate(comps[: k + 1]))


def _divide_exact(f: DeltaPoly, m: int) -> DeltaPoly:
    for c in f.terms.values():
        if c % m:
            raise DivisionNotExact(f"ghost inversion hit a coefficient {c} not divisible by {m}")
    return DeltaPoly(f.ring, {k: c // m for k, c in f.terms.items()}, True)


def _invert_ghost(targets: Sequence[DeltaPoly], p: int) -> tuple:
    """Components whose ghost vector is ``targets``."""
    out = []
    for k, t in enumerate(targets):
        lower = sum((c ** (p ** (k - i))).scale(p ** i) for i, c in enumerate(out))
        out.append(_divide_exact(t - lower, p ** k))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def build_table(p: int, n: int) -> WittPolynomialTable:
    """Sum and product polynomials S_k, P_k in a0.., b0.. for W_n."""
    ring = CoeffRing.exact(p)
    a = [_a(ring, k) for k in range(n)]
    b = [_b(ring, k) for k in range(n)]
    ga = [_ghost_poly(a, k, p) for k in range(n)]
    gb = [_ghost_poly(b, k, p) for k in range(n)]
    sums = _invert_ghost([x + y for x, y in zip(ga, gb)], p)
    prods = _invert_ghost([x * y for x, y in zip(ga, gb)], p)
    return WittPolynomialTable(p, n, sums, prods)


@functools.lru_cache(maxsize=None)
def frobenius_table(p: int, n: int) -> tuple:
    """F_k in a0..a_{n-1} with ghost_k(F(a)) = ghost_{k+1}(a), k < n-1."""
    ring = CoeffRing.exact(p)
    a = [_a(ring, k) for k in range(n)]
    return _invert_ghost([_ghost_poly(a, k + 1, p) for k in range(n - 1)], p)


@functools.lru_cache(maxsize=None)
def integer_components(m: int, p: int, n: int) -> tuple:
    """Witt components of the integer m (all ghost components equal m)."""
    out = []
    for k in range(n):
        lower = sum(p ** i * c ** (p ** (k - i)) for i, c in enumerate(out))
        q, r = divmod(m - lower, p ** k)
        if r:
            raise DivisionNotExact(f"integer {m} has no integral Witt component {k}")
        out.append(q)
    return tuple(out)


def _evaluate(poly: DeltaPoly, u: WittVector, v: WittVector | None = None):
    values = {VarId(f"a{i}", 0): c for i, c in enumerate(u.components)}
    if v is not None:
        values.update({VarId(f"b{i}", 0): c for i, c in enumerate(v.components)})
    return poly.evaluate(values, _unit_like(u.components[0]))


def _check_pair(u: WittVector, v: WittVector):
    if u.p != v.p or u.n != v.n:
        raise RingMismatch(f"W_{u.n} over p={u.p} vs W_{v.n} over p={v.p}")
    if u.base != v.base:
        raise RingMismatch("Witt vectors over different base rings")


def witt_vector(components: Iterable, p: int) -> WittVector:
    return WittVector(p, tuple(components))


def ghost(w: WittVector) -> list:
    """ghost_k = Σ_{i<=k} p^i a_i^(p^(k-i))."""
    p = w.p
    out = []
    for k in range(w.n):
        acc = None
        for i in range(k + 1):
            t = w.components[i] ** (p ** (k - i)) * (p ** i)
            acc = t if acc is None else acc + t
        out.append(acc)
    return out


def witt_add(u: WittVector, v: WittVector) -> WittVector:
    _check_pair(u, v)
    table = build_table(u.p, u.n)
    return WittVector(u.p, tuple(_evaluate(s, u, v) for s in table.sum_polys))


def witt_mul(u: WittVector, v: WittVector) -> WittVector:
    _check_pair(u, v)
    table = build_table(u.p, u.n)
    return WittVector(u.p, tuple(_evaluate(s, u, v) for s in table.prod_polys))


def zero_like(w: WittVector) -> WittVector:
    z = _unit_like(w.components[0]) * 0
    return WittVector(w.p, (z,) * w.n)


def from_integer(m: int, like: WittVector) -> WittVector:
    """The image of the integer m in W_n of the base ring of ``like``."""
    one = _unit_like(like.components[0])
    return WittVector(like.p, tuple(one * c for c in integer_components(m, like.p, like.n)))


def teichmuller(x, p: int, n: int) -> WittVector:
    z = _unit_like(x) * 0
    return WittVector(p, (x,) + (z,) * (n - 1))


def verschiebung(w: WittVector) -> WittVector:
    """(a0, .., a_{n-1}) -> (0, a0, .., a_{n-2})."""
    z = _unit_like(w.components[0]) * 0
    return WittVector(w.p, (z,) + w.components[:-1])


def frobenius_w(w: WittVector) -> WittVector:
    """W_n -> W_{n-1} with ghost_i(F(w)) = ghost_{i+1}(w)."""
    if w.n < 2:
        raise LengthTooShort("Frobenius on W_n needs n >= 2")
    return WittVector(w.p, tuple(_evaluate(f, w) for f in frobenius_table(w.p, w.n)))


def truncate(w: WittVector, m: int) -> WittVector:
    if not 1 <= m <= w.n:
        raise ValueError(f"cannot truncate W_{w.n} to length {m}")
    return WittVector(w.p, w.components[:m])


def delta_to_section(ctx: DeltaContext, f: DeltaPoly) -> WittVector:
    """f -> (f, δ(f)) in W_2. In Z/p^N both components are read modulo p^(N-1)."""
    df = delta(f, ctx)
    if not f.ring.is_exact:
        f = f.reduce(df.ring)
    return WittVector(ctx.p, (f, df))


# ---------------------------------------------------------------- finite fields


@dataclass(frozen=True)
class FiniteField:
    """F_q with q = p^r, elements are coefficient tuples modulo a fixed irreducible."""

    p: int
    r: int
    modulus: tuple  # monic, low degree first, length r + 1

    @classmethod
    @functools.lru_cache(maxsize=None)
    def of_order(cls, q: int) -> "FiniteField":
        p = next(k for k in range(2, q + 1) if q % k == 0)
        r, t = 0, q
        while t % p == 0:
            t //= p
            r += 1
        if t != 1:
            raise ValueError(f"{q} is not a prime power")
        return cls(p, r, _find_irreducible(p, r))

    @property
    def order(self) -> int:
        return self.p ** self.r

    def element(self, coeffs) -> "GF":
        coeffs = tuple(c % self.p for c in coeffs) + (0,) * (self.r - len(coeffs))
        return GF(self, coeffs[: self.r])

    def elements(self) -> list:
        return [GF(self, c) for c in itertools.product(range(self.p), repeat=self.r)]

    def one(self) -> "GF":
        return self.element((1,))

    def zero(self) -> "GF":
        return self.element(())


def _polymulmod(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _has_root_factor(poly, p, r):
    # brute force: irreducible iff no monic factor of degree 1..r//2 divides it
    for deg in range(1, r // 2 + 1):
        for tail in itertools.product(range(p), repeat=deg):
            f = list(tail) + [1]
            rem = list(poly)
            while len(rem) >= len(f):
                c = rem[-1]
                shift = len(rem) - len(f)
                for i, x in enumerate(f):
                    rem[shift + i] = (rem[shift + i] - c * x) % p
                rem.pop()
            if not any(rem):
                return True
    return False


def _find_irreducible(p: int, r: int) -> tuple:
    if r == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=r):
        poly = list(tail) + [1]
        if poly[0] and not _has_root_factor(poly, p, r):
            return tuple(poly)
    raise ValueError(f"no irreducible of degree {r} over F_{p}")


@dataclass(frozen=True)
class GF:
    field: FiniteField
    coeffs: tuple

    def _other(self, other):
        if isinstance(other, GF):
            if other.field != self.field:
                raise RingMismatch("different finite fields")
            return other
        if isinstance(other, int):
            return self.field.element((other,))
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self.field.element(tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return self.field.element(tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        F = self.field
        prod = _polymulmod(list(self.coeffs), list(o.coeffs), F.p)
        mod = F.modulus
        for top in range(len(prod) - 1, F.r - 1, -1):
            c = prod[top]
            if c:
                for i, m in enumerate(mod):
                    prod[top - F.r + i] = (prod[top - F.r + i] - c * m) % F.p
        return F.element(tuple(prod[: F.r]))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = self.field.one()
        base = self
        if k < 0:
            raise ValueError("negative powers are not needed here")
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __str__(self):
        return "[" + ",".join(map(str, self.coeffs)) + "]"


def frobenius_root(x: GF) -> GF:
    """The unique y with y^p = x (F_q is perfect)."""
    return x ** (x.field.order // x.field.p)


def all_witt_vectors(elements: Sequence, p: int, n: int) -> list:
    return [WittVector(p, c) for c in itertools.product(elements, repeat=n)]


def _frobenius_endo(w: WittVector) -> WittVector:
    # F lowers length by one; pad so that φ is an endomorphism of W_n
    z = _unit_like(w.components[0]) * 0
    return frobenius_w(WittVector(w.p, w.components + (z,)))


def perfectness_check(q: int, n: int = 2) -> bool:
    """φ = F is a bijective ring endomorphism of W_n(F_q), by exhaustive tables."""
    F = FiniteField.of_order(q)
    p = F.p
    if n == 1:
        images = {x ** p for x in F.elements()}
        return len(images) == q
    vecs = all_witt_vectors(F.elements(), p, n)
    phi = {w: _frobenius_endo(w) for w in vecs}
    if len(set(phi.values())) != len(vecs):
        return False
    for u, v in itertools.product(vecs, repeat=2):
        if phi[witt_add(u, v)] != witt_add(phi[u], phi[v]):
            return False
        if phi[witt_mul(u, v)] != witt_mul(phi[u], phi[v]):
            return False
    return True


def _power(w: WittVector, k: int) -> WittVector:
    out = from_integer(1, w)
    for _ in range(k):
        out = witt_mul(out, w)
    return out


def witt_reconstruction_check(n: int, q: int) -> bool:
    """R = W_n(F_q) -> W_n(R/p) recovered from the ring structure of R alone.

    Reduction mod p, Teichmüller lifts (as limits of p-power iterates of an
    arbitrary lift) and division by p (by search) give digits c_i with
    x = Σ p^i [c_i]; the image is (c_0, c_1^p, c_2^(p^2), ..). The check is
    that this is the identity on components.
    """
    F = FiniteField.of_order(q)
    p = F.p
    vecs = all_witt_vectors(F.elements(), p, n)
    pw = {w: witt_mul(from_integer(p, w), w) for w in vecs}
    # p·R must be the kernel of reduction to the residue field
    if {w for w in pw.values()} != {w for w in vecs if w.components[0].is_zero()}:
        return False
    halve = {}
    for w, img in pw.items():
        halve.setdefault(img, w)
    one = F.one()

    def teich(c: GF) -> WittVector:
        root = c
        for _ in range(n - 1):
            root = frobenius_root(root)
        lift = WittVector(p, (root,) + (one,) * (n - 1))
        return _power(lift, p ** (n - 1))

    for x in vecs:
        digits = []
        r = x
        for i in range(n):
            c = r.components[0]
            digits.append(c)
            rest = witt_add(r, witt_mul(from_integer(-1, r), teich(c)))
            if i < n - 1:
                r = halve[rest]
        image = tuple(c ** (p ** i) for i, c in enumerate(digits))
        if image != x.components:
            return False
    return True


def fiber_sequence_check(p: int = 2, N: int = 2, n: int = 3) -> bool:
    """W_1 -> W_n (by V^(n-1)) -> W_{n-1} is exact on component sets over Z/p^N."""
    ring = CoeffRing.modular(p, N)
    elems = [ring(k) for k in range(ring.modulus)]
    vecs = all_witt_vectors(elems, p, n)
    zero_short = WittVector(p, (ring(0),) * (n - 1))

    def v_iter(a):
        w = WittVector(p, (a,) + (ring(0),) * (n - 1))
        for _ in range(n - 1):
            w = verschiebung(w)
        return w

    image = [v_iter(a) for a in elems]
    if len(set(image)) != len(elems):
        return False
    kernel = {w for w in vecs if truncate(w, n - 1) == zero_short}
    if kernel != set(image):
        return False
    # V^(n-1) is additive on W_1
    return all(v_iter(a + b) == witt_add(v_iter(a), v_iter(b)) for a in elems for b in elems)
