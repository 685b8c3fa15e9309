"""The δ operator, the Frobenius lift, δ-compatible substitution and δ-degree pieces.

All computations run on exact integer lifts. In Z/p^N the answer of ``delta``
is only meaningful modulo p^(N-1), so the result ring loses one digit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .coeff import CoeffRing
from .dpoly import (
    ONE,
    DeltaPoly,
    VarId,
    ast_to_poly,
    deg_delta,
    mono_pow,
    monomials_up_to,
    parse,
    sort_monomials,
)
from .errors import DepthExceeded, MissingAssignment, NotDivisible, PrecisionExhausted


@dataclass
class DeltaContext:
    """Which symbols are free and which carry an explicit δ(x_s).

    Free symbols satisfy δ(x_{s,i}) = x_{s,i+1} up to level ``depth``.
    An explicit symbol only exists at level 0; its δ is the stored polynomial.
    """

    ring: CoeffRing
    depth: int = 3
    explicit: dict = field(default_factory=dict)

    def __post_init__(self):
        for s, g in self.explicit.items():
            if g.ring.p != self.ring.p:
                raise ValueError(f"δ({s}) lives over a different prime")
            if g.max_level() > self.depth:
                raise DepthExceeded(f"δ({s}) uses a level above depth {self.depth}")

    @property
    def p(self) -> int:
        return self.ring.p

    def is_free(self, symbol: str) -> bool:
        return symbol not in self.explicit

    def with_explicit(self, **assignments) -> "DeltaContext":
        ex = dict(self.explicit)
        ex.update(assignments)
        return DeltaContext(self.ring, self.depth, ex)

    def with_ring(self, ring: CoeffRing) -> "DeltaContext":
        ex = {s: (g.lift() if ring.is_exact else g.lift().reduce(ring)) for s, g in self.explicit.items()}
        return DeltaContext(ring, self.depth, ex)

    def variables(self, symbols) -> list:
        """Every variable a slice may use: free symbols at levels 0..depth, explicit ones at 0."""
        out = []
        for s in symbols:
            if self.is_free(s):
                out.extend(VarId(s, i) for i in range(self.depth + 1))
            else:
                out.append(VarId(s, 0))
        return out

    def delta_of_var(self, symbol: str, level: int) -> DeltaPoly:
        """δ(x_{s,i}) over exact integers."""
        exact = self.ring.lifted()
        if self.is_free(symbol):
            if level + 1 > self.depth:
                raise DepthExceeded(f"δ({symbol}@{level}) needs level {level + 1} > depth {self.depth}")
            return DeltaPoly.var(exact, symbol, level + 1)
        if level != 0:
            raise DepthExceeded(f"{symbol} has an explicit δ-structure; only level 0 exists")
        return self.explicit[symbol].lift()


def _delta_const(c: int, p: int) -> int:
    return (c - c ** p) // p


class _DeltaEngine:
    """One computation session; memoizes δ of monic monomials."""

    def __init__(self, ctx: DeltaContext):
        self.ctx = ctx
        self.p = ctx.p
        self.ring = ctx.ring.lifted()
        self.memo: dict = {ONE: DeltaPoly.zero(self.ring)}

    def monic(self, m: tuple) -> DeltaPoly:
        if m in self.memo:
            return self.memo[m]
        p = self.p
        s, l, e = m[0]
        head = DeltaPoly.var(self.ring, s, l)
        rest = m[1:] if e == 1 else ((s, l, e - 1),) + m[1:]
        d_head = self.ctx.delta_of_var(s, l)
        d_rest = self.monic(rest)
        rest_poly = DeltaPoly.monomial(self.ring, rest)
        # δ(ab) = a^p δ(b) + b^p δ(a) + p δ(a) δ(b)
        out = head ** p * d_rest + rest_poly ** p * d_head + (d_head * d_rest).scale(p)
        self.memo[m] = out
        return out

    def term(self, m: tuple, c: int) -> DeltaPoly:
        p = self.p
        dc = _delta_const(c, p)
        if m == ONE:
            return DeltaPoly.const(self.ring, dc)
        dm = self.monic(m)
        mp = DeltaPoly.monomial(self.ring, mono_pow(m, p))
        # product rule with the constant factor c
        return dm.scale(c ** p + p * dc) + mp.scale(dc)

    def poly(self, f: DeltaPoly) -> DeltaPoly:
        p = self.p
        f = f.lift()
        items = f.sorted_terms()
        if len(items) <= 1:
            if not items:
                return DeltaPoly.zero(self.ring)
            return self.term(*items[0])
        total = DeltaPoly.zero(self.ring)
        power_sum = DeltaPoly.zero(self.ring)
        for m, c in items:
            total = total + self.term(m, c)
            power_sum = power_sum + DeltaPoly(self.ring, {mono_pow(m, p): c ** p})
        # iterated sum rule, collected: (Σ t_i^p - (Σ t_i)^p) / p
        cross = power_sum - f ** p
        return total + _divide_by_p(cross, p)


def _divide_by_p(f: DeltaPoly, p: int) -> DeltaPoly:
    out = {}
    for m, c in f.terms.items():
        if c % p:
            raise NotDivisible("sum-rule numerator not divisible by p (bug)")
        out[m] = c // p
    return DeltaPoly(f.ring, out, True)


def _check_ring(f: DeltaPoly, ctx: DeltaContext):
    if f.ring.p != ctx.p:
        raise ValueError("polynomial and context use different primes")


def _output_ring(ring: CoeffRing, loss: int) -> CoeffRing:
    if ring.is_exact:
        return ring
    if ring.precision - loss < 1:
        raise PrecisionExhausted(f"δ in {ring} leaves no p-adic digits")
    return ring.with_precision(ring.precision - loss)


def delta(f: DeltaPoly, ctx: DeltaContext) -> DeltaPoly:
    """δ(f) from the sum and product axioms, recursively over monomials."""
    _check_ring(f, ctx)
    out_ring = _output_ring(f.ring, 1)
    result = _DeltaEngine(ctx).poly(f)
    return result if out_ring.is_exact else result.reduce(out_ring)


def delta_power(f: DeltaPoly, k: int, ctx: DeltaContext) -> DeltaPoly:
    """δ^k(f). Modular input loses k digits."""
    _check_ring(f, ctx)
    out_ring = _output_ring(f.ring, k)
    engine = _DeltaEngine(ctx)
    g = f.lift()
    for _ in range(k):
        g = engine.poly(g)
    return g if out_ring.is_exact else g.reduce(out_ring)


def frobenius(f: DeltaPoly, ctx: DeltaContext) -> DeltaPoly:
    """φ(f) = f^p + p·δ(f). Well defined modulo p^N, so no precision is lost."""
    _check_ring(f, ctx)
    ex = f.lift()
    out = ex ** ctx.p + _DeltaEngine(ctx).poly(ex).scale(ctx.p)
    return out if f.ring.is_exact else out.reduce(f.ring)


def evaluate(text_or_ast, ctx: DeltaContext) -> DeltaPoly:
    """Parse (if needed) and evaluate, applying δ to every D(...) node."""
    node = parse(text_or_ast) if isinstance(text_or_ast, str) else text_or_ast
    ring = ctx.ring

    def on_delta(g: DeltaPoly) -> DeltaPoly:
        # nested D(...) keeps working in the lowered precision
        local = ctx if g.ring == ctx.ring else ctx.with_ring(g.ring)
        return delta(g, local)

    return ast_to_poly(node, ring, on_delta)


def substitute(f: DeltaPoly, assignment: Mapping[str, DeltaPoly], ctx: DeltaContext,
               strict: bool = True) -> DeltaPoly:
    """The δ-map determined by x_s ↦ g_s, applied to f: x_{s,i} ↦ δ^i(g_s).

    ``ctx`` is the δ-structure of the target. With ``strict=False`` symbols
    without an assignment are sent to themselves.
    """
    _check_ring(f, ctx)
    engine = _DeltaEngine(ctx)
    ring = f.ring
    exact = ring.lifted()
    cache: dict = {}
    max_loss = 0

    def image(s: str, level: int) -> DeltaPoly:
        nonlocal max_loss
        key = (s, level)
        if key in cache:
            return cache[key]
        if s not in assignment:
            if strict:
                raise MissingAssignment(f"no image for {s}")
            val = DeltaPoly.var(exact, s, level)
        elif level == 0:
            val = assignment[s].lift()
            if val.ring.p != ring.p:
                raise ValueError("assignment uses a different prime")
            val = DeltaPoly(exact, dict(val.terms), True)
        else:
            val = engine.poly(image(s, level - 1))
            max_loss = max(max_loss, level)
        cache[key] = val
        return val

    total = DeltaPoly.zero(exact)
    for m, c in f.lift().terms.items():
        t = DeltaPoly.const(exact, c)
        for s, l, e in m:
            t = t * image(s, l) ** e
        total = total + t
    if ring.is_exact:
        return total
    return total.reduce(_output_ring(ring, max_loss))


def sym_delta_basis(symbols, n: int, p: int, depth: int | None = None) -> list:
    """Monomials in x_{s,i} of δ-degree <= n, in ascending canonical order."""
    if n < 0:
        return []
    top = 0
    while p ** (top + 1) <= n:
        top += 1
    if depth is not None:
        top = min(top, depth)
    vs = [VarId(s, i) for s in symbols for i in range(top + 1)]
    weights = {v: p ** v.level for v in vs}
    return sort_monomials(monomials_up_to(vs, weights, n), p, descending=False)


def in_sym_delta(f: DeltaPoly, n: int) -> bool:
    """Membership in the δ-degree <= n piece."""
    return deg_delta(f) <= n


def monomial_degree_bound(f: DeltaPoly, images: Mapping[str, DeltaPoly]) -> int:
    """deg_delta(f)·max deg_delta(g_s), the filtered-monad bound (zero images count as 0)."""
    m = max((max(0, deg_delta(g)) for g in images.values()), default=0)
    return max(0, deg_delta(f)) * m
