"""Canonical row reduction over Z/p^N and finite slices of quotient rings.

Rows are sparse ``dict`` column -> residue. Smaller column index means a
more significant column; slices put the largest monomial first so normal
forms rewrite leading monomials in terms of smaller ones.
"""

from __future__ import annotations

import heapq
from typing import Iterable, Sequence

from .coeff import CoeffRing, valuation
from .dpoly import DeltaPoly, VarId, mono_mul, monomials_up_to, sort_monomials
from .errors import DegreeExceeded


class HowellBasis:
    """Echelon rows over Z/p^N with the Howell closure property.

    Every pivot entry is exactly p^e. Whenever a row with e > 0 is installed,
    p^(N-e) times it is inserted as well, so the rows with pivot >= c span
    every element of the module that vanishes before column c. This makes
    :meth:`reduce` a canonical normal form and lets kernels be read off.
    """

    def __init__(self, p: int, precision: int):
        self.p = p
        self.N = precision
        self.M = p ** precision
        self.rows: dict = {}  # pivot column -> (e, row)

    def copy(self) -> "HowellBasis":
        out = HowellBasis(self.p, self.N)
        out.rows = dict(self.rows)
        return out

    def _clean(self, vec: dict) -> dict:
        M = self.M
        out = {}
        for c, v in vec.items():
            v %= M
            if v:
                out[c] = v
        return out

    def _axpy(self, v: dict, q: int, r: dict) -> None:
        # v -= q * r  (in place)
        M = self.M
        for c, val in r.items():
            nv = (v.get(c, 0) - q * val) % M
            if nv:
                v[c] = nv
            else:
                v.pop(c, None)

    def _normalized(self, v: dict, c: int) -> tuple:
        a = v[c]
        e = valuation(a, self.p)
        unit = a // self.p ** e
        if unit != 1:
            u = pow(unit, -1, self.M)
            v = {k: val * u % self.M for k, val in v.items()}
        return e, v

    def insert(self, vec: dict) -> None:
        queue = [self._clean(vec)]
        while queue:
            v = queue.pop()
            while v:
                c = min(v)
                e_v = valuation(v[c], self.p)
                if c in self.rows:
                    e_r, r = self.rows[c]
                    if e_v >= e_r:
                        self._axpy(v, v[c] // self.p ** e_r, r)
                        continue
                    e_v, v = self._normalized(v, c)
                    self.rows[c] = (e_v, v)
                    old = dict(r)
                    queue.append(old)
                else:
                    e_v, v = self._normalized(v, c)
                    self.rows[c] = (e_v, v)
                if e_v > 0:
                    scale = self.p ** (self.N - e_v)
                    queue.append(self._clean({k: val * scale for k, val in v.items()}))
                break

    def extend(self, vecs: Iterable[dict]) -> "HowellBasis":
        for v in vecs:
            self.insert(v)
        return self

    def reduce(self, vec: dict) -> dict:
        """Canonical representative of ``vec`` modulo the row span."""
        v = self._clean(vec)
        heap = list(v)
        heapq.heapify(heap)
        done = set()
        while heap:
            c = heapq.heappop(heap)
            if c in done:
                continue
            done.add(c)
            if c not in v or c not in self.rows:
                continue
            e, r = self.rows[c]
            q = v[c] // self.p ** e
            if q:
                self._axpy(v, q, r)
                for k in r:
                    if k > c and k not in done:
                        heapq.heappush(heap, k)
        return v

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def length(self) -> int:
        """log_p of the number of elements in the span."""
        return sum(self.N - e for e, _ in self.rows.values())

    def unit_pivots(self) -> int:
        return sum(1 for e, _ in self.rows.values() if e == 0)

    def pivots(self) -> dict:
        return {c: e for c, (e, _) in self.rows.items()}

    def row_list(self) -> list:
        return [self.rows[c][1] for c in sorted(self.rows)]

    def is_subset_of(self, other: "HowellBasis") -> bool:
        return all(other.contains(r) for _, r in self.rows.values())


def kernel(images: Sequence[dict], target: HowellBasis | None, p: int, precision: int,
           n_target_cols: int) -> HowellBasis:
    """Vectors v in (Z/p^N)^len(images) with Σ v_i·images[i] in the span of ``target``.

    Columns of ``images`` must lie in range(n_target_cols).
    """
    off = n_target_cols
    hb = HowellBasis(p, precision)
    for i, img in enumerate(images):
        row = dict(img)
        row[off + i] = 1
        hb.insert(row)
    if target is not None:
        for r in target.row_list():
            hb.insert(dict(r))
    out = HowellBasis(p, precision)
    for c, (e, r) in hb.rows.items():
        if c >= off:
            out.insert({k - off: v for k, v in r.items()})
    return out


class SliceRing:
    """The degree <= D part of Z/p^N[variables] modulo the ideal slice of ``relations``.

    The ideal slice is spanned by m·r over monomials m with deg(m·r) <= D.
    """

    def __init__(self, variables: Iterable[VarId], relations: Iterable[DeltaPoly], degree: int,
                 precision: int, p: int, weights: dict | None = None):
        self.p = p
        self.N = precision
        self.D = degree
        self.ring = CoeffRing.modular(p, precision)
        self.variables = sorted(set(variables))
        if weights is None:
            weights = {v: p ** v.level for v in self.variables}
        self.weights = weights
        monos = monomials_up_to(self.variables, weights, degree)
        self.columns = sort_monomials(monos, p, descending=True)
        self.index = {m: i for i, m in enumerate(self.columns)}
        self._by_degree = sorted(self.columns, key=lambda m: self.weight(m))
        self.relations = [r for r in relations if not r.is_zero()]
        self.basis = HowellBasis(p, precision)
        for r in self.relations:
            self.add_relation(r)

    def weight(self, m: tuple) -> int:
        return sum(e * self.weights[VarId(s, l)] for s, l, e in m)

    def poly_weight(self, f: DeltaPoly):
        if f.is_zero():
            return float("-inf")
        return max(self.weight(m) for m in f.terms)

    def multiples(self, f: DeltaPoly):
        """Vectors of m·f for every monomial m keeping the weight <= D."""
        df = self.poly_weight(f)
        if df > self.D:
            return
        for v in f.variables():
            if v not in self.weights:
                raise ValueError(f"{v} is outside the slice variables")
        for m in self._by_degree:
            if self.weight(m) + df > self.D:
                break
            vec = {}
            for t, c in f.terms.items():
                col = self.index[mono_mul(m, t)]
                vec[col] = vec.get(col, 0) + c
            yield vec

    def add_relation(self, r: DeltaPoly) -> None:
        for vec in self.multiples(r):
            self.basis.insert(vec)

    def extended(self, polys: Iterable[DeltaPoly]) -> HowellBasis:
        """The relation span enlarged by the ideal slice of ``polys`` (self is unchanged)."""
        hb = self.basis.copy()
        for f in polys:
            for vec in self.multiples(f):
                hb.insert(vec)
        return hb

    def vector(self, f: DeltaPoly) -> dict:
        vec = {}
        M = self.p ** self.N
        for m, c in f.terms.items():
            if c % M == 0:
                continue
            if m not in self.index:
                if any(VarId(s, l) not in self.weights for s, l, _ in m):
                    raise ValueError(f"{f} uses variables outside the slice")
                raise DegreeExceeded(f"degree {self.weight(m)} exceeds slice bound {self.D}")
            vec[self.index[m]] = c % M
        return vec

    def poly(self, vec: dict) -> DeltaPoly:
        return DeltaPoly(self.ring, {self.columns[i]: c for i, c in vec.items()})

    def normal_form(self, f: DeltaPoly) -> DeltaPoly:
        return self.poly(self.basis.reduce(self.vector(f)))

    def is_zero(self, f: DeltaPoly) -> bool:
        return self.basis.contains(self.vector(f))

    def contains_one(self) -> bool:
        return self.basis.contains({self.index[()]: 1})

    @property
    def size(self) -> int:
        return len(self.columns)

    def length(self) -> int:
        """log_p of the number of elements of the quotient slice."""
        return self.size * self.N - self.basis.length()

    def dimension(self) -> int:
        """dim over F_p of the quotient slice modulo p (its minimal number of generators)."""
        return self.size - self.basis.unit_pivots()
