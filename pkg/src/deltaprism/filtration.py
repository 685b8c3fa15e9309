"""Filtrations by ideals, Breuil–Kisin twists and Koszul regularity on slices.

Functions here take a presentation ``A`` and only use ``A.p``,
``A.precision``, ``A.slice_variables()`` and ``A.closed_relations()``, so
they work for any :class:`~deltaprism.prism.DeltaPresentation`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .dpoly import DeltaPoly, deg_delta
from .errors import NotRegular
from .linalg import HowellBasis, SliceRing, kernel


@dataclass(frozen=True, order=True)
class Twist:
    """Breuil–Kisin weight n, written {n}."""

    n: int = 0

    def __add__(self, other: "Twist") -> "Twist":
        return Twist(self.n + other.n)

    def __neg__(self) -> "Twist":
        return Twist(-self.n)

    def __sub__(self, other: "Twist") -> "Twist":
        return Twist(self.n - other.n)

    def __str__(self):
        return "{" + str(self.n) + "}"


def twist_arith(m: Twist, n: Twist) -> Twist:
    """Twist of a tensor product."""
    return m + n


def apply_twist(table: Sequence, n) -> list:
    """Shift the twist column of a [[weight, rank, twist], ..] table by n."""
    k = n.n if isinstance(n, Twist) else int(n)
    return [[w, r, t + k] for w, r, t in table]


# ---------------------------------------------------------------- Koszul


def _weight(f: DeltaPoly) -> int:
    return max(0, deg_delta(f))


def _p_unit_constant(f: DeltaPoly, p: int) -> bool:
    if not f.is_constant() or f.is_zero():
        return False
    c = f.constant_term()
    return c % p == 0 and (c // p) % p != 0


def koszul_homology_lengths(A, seq: Sequence[DeltaPoly], degree: int, precision: int,
                            extra_relations: Sequence[DeltaPoly] = ()) -> list:
    """log_p |H_i| of the Koszul complex of ``seq`` on the degree slice, i = 0..k.

    The chain module on e_S is the quotient slice of weight <= degree - Σ deg f_s.
    """
    p = A.p
    variables = A.slice_variables()
    relations = list(A.closed_relations()) + list(extra_relations)
    k = len(seq)
    degs = [_weight(f) for f in seq]
    slices: dict = {}

    def slice_at(bound):
        if bound not in slices:
            slices[bound] = SliceRing(variables, relations, bound, precision, p)
        return slices[bound]

    chains = []  # per i: list of (S, slice, offset)
    for i in range(k + 1):
        comps, off = [], 0
        for S in itertools.combinations(range(k), i):
            bound = degree - sum(degs[s] for s in S)
            if bound < 0:
                continue
            sl = slice_at(bound)
            comps.append((S, sl, off))
            off += sl.size
        chains.append((comps, off))

    def relation_basis(i) -> HowellBasis:
        hb = HowellBasis(p, precision)
        for _, sl, off in chains[i][0]:
            for r in sl.basis.row_list():
                hb.insert({c + off: v for c, v in r.items()})
        return hb

    def boundary_images(i) -> list:
        # d(m e_S) = Σ_j (-1)^j f_{s_j} m e_{S \ s_j}
        targets = {S: (sl, off) for S, sl, off in chains[i - 1][0]}
        images = []
        lifted = [x.lift() for x in seq]
        for S, sl, _ in chains[i][0]:
            for m in sl.columns:
                vec: dict = {}
                mono = DeltaPoly.monomial(lifted[0].ring, m)
                for j, s in enumerate(S):
                    T = S[:j] + S[j + 1:]
                    tsl, toff = targets[T]
                    img = (lifted[s] * mono).scale(-1 if j % 2 else 1)
                    for c, v in tsl.vector(img).items():
                        vec[c + toff] = vec.get(c + toff, 0) + v
                images.append(vec)
        return images

    lengths = []
    for i in range(k + 1):
        comps, size = chains[i]
        if i == 0:
            cycles_len = size * precision
        else:
            z = kernel(boundary_images(i), relation_basis(i - 1), p, precision, chains[i - 1][1])
            cycles_len = z.length()
        bnd = relation_basis(i)
        if i < k:
            bnd.extend(boundary_images(i + 1))
        lengths.append(cycles_len - bnd.length())
    return lengths


def koszul_regular(A, seq: Sequence[DeltaPoly], degree: int | None = None, precision: int | None = None,
                   extra_relations: Sequence[DeltaPoly] = ()) -> bool:
    """True iff the Koszul complex of ``seq`` has H_i = 0 for i >= 1 on the slice.

    Z/p^N has p-torsion, so an element equal to p times a unit is taken out of
    the sequence and the rest is checked over A/p instead.
    """
    seq = list(seq)
    if precision is None:
        precision = A.precision
    for i, f in enumerate(seq):
        if _p_unit_constant(f, A.p):
            seq = seq[:i] + seq[i + 1:]
            precision = 1
            break
    if not seq:
        return True
    if degree is None:
        degree = max(2, 2 * sum(_weight(f) for f in seq))
    lengths = koszul_homology_lengths(A, seq, degree, precision, extra_relations)
    return all(h == 0 for h in lengths[1:])


# ---------------------------------------------------------------- filtrations


def find_point(A, ideal: Sequence[DeltaPoly]) -> dict | None:
    """An F_p-point of A/(p, ideal) on the slice variables, by brute force."""
    p = A.p
    variables = A.slice_variables()
    polys = [f.lift() for f in list(A.closed_relations()) + list(ideal)]
    for values in itertools.product(range(p), repeat=len(variables)):
        point = dict(zip(variables, values))
        if all(f.evaluate(point) % p == 0 for f in polys):
            return point
    return None


@dataclass
class FilteredAlgebra:
    """A decreasing filtration of A given by generators of each weight."""

    base: object
    weight_pieces: dict
    max_weight: int
    twist_step: int = 0  # gr^n carries twist {twist_step * n}
    generators: tuple = field(default=())

    def piece(self, n: int) -> list:
        return self.weight_pieces[n]

    def twist(self, n: int) -> Twist:
        return Twist(self.twist_step * n)

    def gr_rank(self, n: int) -> int:
        """Minimal number of generators of F^n / F^(n+1) near an F_p-point.

        Measured as dim_{F_p} J^n / m·J^n on a degree slice over Z/p^(n+2),
        where m = (p, v - c_v) is the maximal ideal of a point on V(p, J).
        """
        A = self.base
        p = A.p
        point = find_point(A, list(self.generators))
        if point is None:
            raise ValueError("no F_p-point on the quotient; rank is not measured")
        gens = self.weight_pieces[n]
        e = max((_weight(g) for g in self.generators), default=0)
        degree = n * e + max(e, 1)
        precision = n + 2
        variables = A.slice_variables()
        sl = SliceRing(variables, list(A.closed_relations()), degree, precision, p)
        ring = sl.ring.lifted()
        upper = sl.extended(gens)
        maximal = [DeltaPoly.const(ring, p)] + [
            DeltaPoly.var(ring, v.symbol, v.level) - point[v] for v in variables
        ]
        lower = sl.extended(g.lift() * m for g in gens for m in maximal)
        return upper.length() - lower.length()

    def rank_table(self) -> list:
        return [[n, self.gr_rank(n), self.twist(n).n] for n in range(self.max_weight + 1)]

    def is_nested(self, degree: int | None = None) -> bool:
        """Each weight-(n+1) generator lies in the ideal of the weight-n piece."""
        A = self.base
        if degree is None:
            degree = max(1, max((_weight(g) for gs in self.weight_pieces.values() for g in gs), default=0))
        for n in range(self.max_weight):
            sl = SliceRing(A.slice_variables(), list(A.closed_relations()) + list(self.weight_pieces[n]),
                           degree, A.precision, A.p)
            if not all(sl.is_zero(g) for g in self.weight_pieces[n + 1]):
                return False
        return True


def _monomials_in(seq: Sequence[DeltaPoly], n: int) -> list:
    out = []
    for combo in itertools.combinations_with_replacement(range(len(seq)), n):
        g = DeltaPoly.const(seq[0].ring, 1)
        for i in combo:
            g = g * seq[i]
        out.append(g)
    return out


def i_adic(A, d: DeltaPoly, max_weight: int) -> FilteredAlgebra:
    """Filtration by powers of (d); gr^n carries twist {n}."""
    if not koszul_regular(A, [d], degree=2 * max(1, max_weight)):
        raise NotRegular(f"{d} is a zero divisor on the slice")
    pieces = {n: [d ** n] for n in range(max_weight + 1)}
    return FilteredAlgebra(A, pieces, max_weight, twist_step=1, generators=(d,))


def hodge_regular(A, seq: Sequence[DeltaPoly], max_weight: int) -> FilteredAlgebra:
    """Filtration by powers of J = (seq) for a Koszul-regular seq."""
    seq = list(seq)
    if not seq:
        raise NotRegular("the Hodge filtration needs a nonempty sequence")
    if not koszul_regular(A, seq, degree=2 * max(1, max_weight) * max(1, max(_weight(f) for f in seq))):
        raise NotRegular("sequence is not Koszul-regular on the slice")
    pieces = {n: _monomials_in(seq, n) for n in range(max_weight + 1)}
    return FilteredAlgebra(A, pieces, max_weight, twist_step=0, generators=tuple(seq))
