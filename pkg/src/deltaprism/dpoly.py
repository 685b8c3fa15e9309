"""Sparse polynomials in δ-indexed variables ``s@i``.

A monomial is a tuple of ``(symbol, level, exponent)`` triples sorted by
``(symbol, level)`` with positive exponents. Terms are kept as a plain
``dict`` from monomial to ``int``; the owning :class:`CoeffRing` normalizes.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple

from .coeff import Coeff, CoeffRing
from .errors import NotDivisible, ParseError, RingMismatch

NEG_INF = float("-inf")

ONE = ()


class VarId(NamedTuple):
    symbol: str
    level: int = 0

    def __str__(self):
        return self.symbol if self.level == 0 else f"{self.symbol}@{self.level}"


# ---------------------------------------------------------------- monomials


def mono_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        ka, kb = a[i][:2], b[j][:2]
        if ka == kb:
            out.append((ka[0], ka[1], a[i][2] + b[j][2]))
            i += 1
            j += 1
        elif ka < kb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_pow(m: tuple, k: int) -> tuple:
    if k == 0:
        return ONE
    return tuple((s, l, e * k) for s, l, e in m)


def mono_from_vars(pairs: Iterable[tuple]) -> tuple:
    """Build a monomial from ``(symbol, level, exponent)`` triples in any order."""
    acc: dict = {}
    for s, l, e in pairs:
        if e:
            acc[(s, l)] = acc.get((s, l), 0) + e
    return tuple((s, l, e) for (s, l), e in sorted(acc.items()) if e)


def mono_degree(m: tuple, p: int) -> int:
    return sum(e * p ** l for _, l, e in m)


def mono_divides(a: tuple, b: tuple) -> bool:
    db = {(s, l): e for s, l, e in b}
    return all(db.get((s, l), 0) >= e for s, l, e in a)


def mono_quotient(b: tuple, a: tuple) -> tuple:
    da = {(s, l): e for s, l, e in a}
    out = []
    for s, l, e in b:
        r = e - da.get((s, l), 0)
        if r < 0:
            raise NotDivisible("monomial does not divide")
        if r:
            out.append((s, l, r))
    return tuple(out)


def compare_monomials(a: tuple, b: tuple, p: int) -> int:
    """Canonical order: δ-degree first, then reverse-lexicographic on (symbol, level).

    Returns a positive number when ``a`` is the larger monomial.
    """
    da, db = mono_degree(a, p), mono_degree(b, p)
    if da != db:
        return 1 if da > db else -1
    i, j = len(a) - 1, len(b) - 1
    while i >= 0 and j >= 0:
        va, vb = a[i][:2], b[j][:2]
        if va == vb:
            if a[i][2] != b[j][2]:
                return 1 if a[i][2] < b[j][2] else -1
            i -= 1
            j -= 1
        elif va > vb:
            return -1
        else:
            return 1
    if i < 0 and j < 0:
        return 0
    return 1 if i < 0 else -1


@functools.lru_cache(maxsize=None)
def _sort_key(p: int):
    return functools.cmp_to_key(lambda a, b: compare_monomials(a, b, p))


def sort_monomials(monos: Iterable[tuple], p: int, descending: bool = True) -> list:
    return sorted(monos, key=_sort_key(p), reverse=descending)


def format_monomial(m: tuple) -> str:
    parts = []
    for s, l, e in m:
        v = s if l == 0 else f"{s}@{l}"
        parts.append(v if e == 1 else f"{v}^{e}")
    return "*".join(parts)


# ---------------------------------------------------------------- DeltaPoly


class DeltaPoly:
    """Immutable sparse polynomial over a :class:`CoeffRing`."""

    __slots__ = ("ring", "terms", "_deg")

    def __init__(self, ring: CoeffRing, terms: dict | None = None, _normalized=False):
        self.ring = ring
        if terms is None:
            terms = {}
        elif not _normalized:
            terms = {m: ring.normalize(c) for m, c in terms.items()}
            terms = {m: c for m, c in terms.items() if c}
        self.terms = terms
        self._deg = None

    # constructors
    @classmethod
    def zero(cls, ring: CoeffRing) -> "DeltaPoly":
        return cls(ring, {}, True)

    @classmethod
    def const(cls, ring: CoeffRing, c) -> "DeltaPoly":
        return cls(ring, {ONE: int(c)})

    @classmethod
    def var(cls, ring: CoeffRing, symbol: str, level: int = 0, exponent: int = 1) -> "DeltaPoly":
        return cls(ring, {((symbol, level, exponent),): 1})

    @classmethod
    def monomial(cls, ring: CoeffRing, mono: tuple, c: int = 1) -> "DeltaPoly":
        return cls(ring, {mono: c})

    # coercion
    def _coerce(self, other) -> "DeltaPoly":
        if isinstance(other, DeltaPoly):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, Coeff):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return DeltaPoly.const(self.ring, other.value)
        if isinstance(other, int):
            return DeltaPoly.const(self.ring, other)
        return NotImplemented

    # ring operations
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out = dict(self.terms)
        norm = self.ring.normalize
        for m, c in o.terms.items():
            v = norm(out.get(m, 0) + c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return DeltaPoly(self.ring, out, True)

    __radd__ = __add__

    def __neg__(self):
        norm = self.ring.normalize
        return DeltaPoly(self.ring, {m: norm(-c) for m, c in self.terms.items()}, True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if len(o.terms) == 1 and ONE in o.terms:
            c = o.terms[ONE]
            return self.scale(c)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return DeltaPoly(self.ring, out)

    __rmul__ = __mul__

    def scale(self, c: int) -> "DeltaPoly":
        return DeltaPoly(self.ring, {m: v * c for m, v in self.terms.items()})

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        if len(self.terms) == 1:
            (m, c), = self.terms.items()
            if self.ring.modulus is None:
                cc = c ** k
            else:
                cc = pow(c, k, self.ring.modulus)
            return DeltaPoly(self.ring, {mono_pow(m, k): cc})
        result = DeltaPoly.const(self.ring, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # comparisons
    def __eq__(self, other):
        if isinstance(other, (int, Coeff)):
            other = self._coerce(other)
        if not isinstance(other, DeltaPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # inspection
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and ONE in self.terms)

    def constant_term(self) -> int:
        return self.terms.get(ONE, 0)

    def coeff(self, mono: tuple) -> Coeff:
        return Coeff(self.terms.get(mono, 0), self.ring)

    def variables(self) -> set:
        return {VarId(s, l) for m in self.terms for s, l, _ in m}

    def symbols(self) -> set:
        return {s for m in self.terms for s, _, _ in m}

    def max_level(self) -> int:
        return max((l for m in self.terms for _, l, _ in m), default=0)

    def sorted_terms(self, descending: bool = True) -> list:
        order = sort_monomials(self.terms, self.ring.p, descending)
        return [(m, self.terms[m]) for m in order]

    def leading_monomial(self) -> tuple:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return sort_monomials(self.terms, self.ring.p)[0]

    # ring changes
    def lift(self) -> "DeltaPoly":
        """Same coefficients read as exact integers (representatives in [0, p^N))."""
        if self.ring.is_exact:
            return self
        return DeltaPoly(self.ring.lifted(), dict(self.terms), True)

    def reduce(self, ring: CoeffRing) -> "DeltaPoly":
        if ring.p != self.ring.p:
            raise RingMismatch("cannot change the prime")
        if ring.is_exact and not self.ring.is_exact:
            raise RingMismatch("use lift() to pass to exact coefficients")
        if not self.ring.is_exact and ring.precision > self.ring.precision:
            raise RingMismatch("cannot raise precision")
        return DeltaPoly(ring, dict(self.terms))

    def map_coefficients(self, fn: Callable[[int], int]) -> "DeltaPoly":
        return DeltaPoly(self.ring, {m: fn(c) for m, c in self.terms.items()})

    def evaluate(self, values: dict, one=1):
        """Ring-homomorphic evaluation; ``values`` maps :class:`VarId` to anything with + and *."""
        total = None
        for m, c in self.terms.items():
            t = one * c
            for s, l, e in m:
                t = t * values[VarId(s, l)] ** e
            total = t if total is None else total + t
        return one * 0 if total is None else total

    def __repr__(self):
        return f"DeltaPoly({format_poly(self)!r}, {self.ring})"

    def __str__(self):
        return format_poly(self)


def deg_delta(f: DeltaPoly):
    """max over monomials of Σ p^level·exponent; -inf for zero."""
    if f._deg is None:
        p = f.ring.p
        f._deg = max((mono_degree(m, p) for m in f.terms), default=NEG_INF)
    return f._deg


def format_poly(f: DeltaPoly) -> str:
    if not f.terms:
        return "0"
    pieces = []
    for m, c in f.sorted_terms():
        body = format_monomial(m)
        if not body:
            text, sign = str(abs(c)), c < 0
        elif abs(c) == 1:
            text, sign = body, c < 0
        else:
            text, sign = f"{abs(c)}*{body}", c < 0
        if not pieces:
            pieces.append("-" + text if sign else text)
        else:
            pieces.append(("- " if sign else "+ ") + text)
    return " ".join(pieces)


def to_json(f: DeltaPoly) -> list:
    return [[str(c), [[s, l, e] for s, l, e in m]] for m, c in f.sorted_terms()]


def from_json(data: list, ring: CoeffRing) -> DeltaPoly:
    terms: dict = {}
    for c, vars_ in data:
        m = mono_from_vars(tuple(v) for v in vars_)
        terms[m] = terms.get(m, 0) + int(c)
    return DeltaPoly(ring, terms)


def exact_divide(f: DeltaPoly, g: DeltaPoly) -> DeltaPoly:
    """Quotient q with f = q·g, by leading-term division; raises NotDivisible otherwise.

    Leading coefficients must divide exactly over the integers, so this is
    meant for exact rings (modular input is lifted first).
    """
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    ring = f.ring
    f, g = f.lift(), g.lift()
    lm = g.leading_monomial()
    lc = g.terms[lm]
    q: dict = {}
    r = f
    while r.terms:
        m = r.leading_monomial()
        c = r.terms[m]
        if c % lc or not mono_divides(lm, m):
            raise NotDivisible(f"{format_poly(g)} does not divide {format_poly(f)}")
        qm = mono_quotient(m, lm)
        qc = c // lc
        q[qm] = q.get(qm, 0) + qc
        r = r - DeltaPoly(r.ring, {qm: qc}) * g
    return DeltaPoly(ring, q)


def monomials_up_to(variables: Iterable[VarId], weights: dict, bound: int) -> list:
    """All monomials in ``variables`` of weighted degree <= bound."""
    vs = sorted(set(variables))
    out = []

    def rec(idx, current, remaining):
        if idx == len(vs):
            out.append(tuple(current))
            return
        v = vs[idx]
        w = weights[v]
        e = 0
        while e * w <= remaining:
            if e:
                current.append((v.symbol, v.level, e))
            rec(idx + 1, current, remaining - e * w)
            if e:
                current.pop()
            e += 1
            if w == 0:
                raise ValueError("zero-weight variable makes the slice infinite")

    if bound >= 0:
        rec(0, [], bound)
    return out


# ---------------------------------------------------------------- expressions


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    symbol: str
    level: int = 0


@dataclass(frozen=True)
class Add:
    items: tuple  # of (sign, node), sign in {+1, -1}


@dataclass(frozen=True)
class Mul:
    factors: tuple


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


@dataclass(frozen=True)
class D:
    arg: object


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str) -> list:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.end() - len(m.group(m.lastindex))
        if m.group(1) is not None:
            toks.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            toks.append(("ident", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*^@()":
                raise ParseError(f"unexpected character {ch!r}", start)
            toks.append((ch, ch, start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            want = "end of input" if kind == "end" else repr(kind)
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {want}, found {found}", tok[2])
        self.i += 1
        return tok

    def expr(self):
        items = []
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        items.append((sign, self.term()))
        while self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
            items.append((sign, self.term()))
        if len(items) == 1 and items[0][0] == 1:
            return items[0][1]
        return Add(tuple(items))

    def term(self):
        factors = [self.factor()]
        while self.peek()[0] == "*":
            self.take()
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def factor(self):
        base = self.base()
        if self.peek()[0] == "^":
            self.take()
            exp = self.take("int")[1]
            return Pow(base, exp)
        return base

    def base(self):
        tok = self.peek()
        if tok[0] == "int":
            self.take()
            return Num(tok[1])
        if tok[0] == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        if tok[0] == "ident":
            self.take()
            if tok[1] == "D" and self.peek()[0] == "(":
                self.take("(")
                node = self.expr()
                self.take(")")
                return D(node)
            level = 0
            if self.peek()[0] == "@":
                self.take()
                level = self.take("int")[1]
            return Var(tok[1], level)
        found = "end of input" if tok[0] == "end" else repr(tok[1])
        raise ParseError(f"unexpected {found}", tok[2])


def parse(text: str):
    """Parse an expression into an AST; raises :class:`ParseError` with the offset."""
    p = _Parser(text)
    node = p.expr()
    p.take("end")
    return node


def ast_to_poly(node, ring: CoeffRing, on_delta: Callable | None = None) -> DeltaPoly:
    """Evaluate an AST. ``D(...)`` nodes need ``on_delta`` (see :mod:`delta_ops`)."""
    if isinstance(node, Num):
        return DeltaPoly.const(ring, node.value)
    if isinstance(node, Var):
        return DeltaPoly.var(ring, node.symbol, node.level)
    if isinstance(node, Add):
        acc = DeltaPoly.zero(ring)
        for sign, item in node.items:
            v = ast_to_poly(item, ring, on_delta)
            acc = acc + v if sign > 0 else acc - v
        return acc
    if isinstance(node, Mul):
        acc = DeltaPoly.const(ring, 1)
        for item in node.factors:
            acc = acc * ast_to_poly(item, ring, on_delta)
        return acc
    if isinstance(node, Pow):
        return ast_to_poly(node.base, ring, on_delta) ** node.exponent
    if isinstance(node, D):
        if on_delta is None:
            raise ValueError("D(...) needs a δ-context to evaluate")
        return on_delta(ast_to_poly(node.arg, ring, on_delta))
    raise TypeError(f"unknown node {node!r}")


def parse_poly(text: str, ring: CoeffRing) -> DeltaPoly:
    return ast_to_poly(parse(text), ring)
