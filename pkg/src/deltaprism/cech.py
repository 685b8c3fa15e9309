"""Truncated Čech–Alexander complexes of a polynomial surjection P -> R.

Level m is the envelope over A ⊗ P^(m+1) of the ideal generated by the
sequence (on copy 0) and the differences g_0 - g_c of the copies of each
generator g of P. A monotone map σ: [m] -> [m'] acts by

    g_c -> g_σ(c),   z_c -> z_σ(c) - z_σ(0)   (z_0 = 0),
    y_i -> y_i - Σ_g z_σ(0),g · Q_i,g

where the Q are divided differences of the sequence, so that d·y_i goes to
the image of x_i. All maps are δ-maps determined by these generator images.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .delta_ops import DeltaContext, substitute
from .dpoly import DeltaPoly, VarId, exact_divide
from .errors import DegreeExceeded
from .linalg import HowellBasis, SliceRing, kernel
from .prism import DeltaPresentation, EnvelopePresentation, Prism, default_names, envelope_regular


def rename_symbols(f: DeltaPoly, mapping: dict) -> DeltaPoly:
    """Relabel symbols, keeping levels and exponents."""
    out: dict = {}
    for m, c in f.terms.items():
        key = tuple(sorted((mapping.get(s, s), l, e) for s, l, e in m))
        out[key] = out.get(key, 0) + c
    return DeltaPoly(f.ring, out)


def copy_name(g: str, c: int) -> str:
    return f"{g}_{c}"


@dataclass
class CechLevel:
    m: int
    envelope: EnvelopePresentation
    y_names: tuple
    z_names: dict  # (c, g) -> name, c >= 1

    @property
    def slice(self) -> SliceRing:
        return self.envelope.slice

    @property
    def ctx(self) -> DeltaContext:
        return self.envelope.presentation.ctx


@dataclass
class CosimplicialMap:
    """The δ-map between two levels induced by a monotone σ."""

    name: str
    source: int
    target: int
    sigma: tuple
    images: dict  # symbol -> exact polynomial in target generators
    _var_cache: dict = field(default_factory=dict, repr=False)
    _matrix: list | None = field(default=None, repr=False)

    def apply(self, f: DeltaPoly, ctx: DeltaContext) -> DeltaPoly:
        return substitute(f.lift(), self.images, ctx, strict=False)

    def var_image(self, v: VarId, ctx: DeltaContext) -> DeltaPoly:
        if v not in self._var_cache:
            ring = ctx.ring
            self._var_cache[v] = self.apply(DeltaPoly.var(ring, v.symbol, v.level), ctx)
        return self._var_cache[v]

    def matrix(self, src: SliceRing, tgt: SliceRing, ctx: DeltaContext) -> list:
        """Image vector (free target coordinates) of every source column."""
        if self._matrix is not None:
            return self._matrix
        ring = ctx.ring
        polys: dict = {(): DeltaPoly.const(ring, 1)}
        out = []
        for mono in src.columns:
            out.append(None)
        order = sorted(range(len(src.columns)), key=lambda i: src.weight(src.columns[i]))
        for i in order:
            mono = src.columns[i]
            if mono not in polys:
                s, l, e = mono[0]
                rest = mono[1:] if e == 1 else ((s, l, e - 1),) + mono[1:]
                polys[mono] = polys[rest] * self.var_image(VarId(s, l), ctx)
            try:
                out[i] = tgt.vector(polys[mono])
            except DegreeExceeded as exc:
                raise DegreeExceeded(
                    f"{self.name} sends a degree-{src.weight(mono)} monomial beyond the slice; "
                    "use a degree-compatible sequence or raise D") from exc
        self._matrix = out
        return out


def coface_sigma(m: int, j: int) -> tuple:
    """[m] -> [m+1] skipping j."""
    return tuple(c if c < j else c + 1 for c in range(m + 1))


def codegeneracy_sigma(m: int, j: int) -> tuple:
    """[m+1] -> [m] hitting j twice."""
    return tuple(c if c <= j else c - 1 for c in range(m + 2))


@dataclass
class CosimplicialRing:
    prism: Prism
    P: DeltaPresentation
    seq: tuple
    L: int
    levels: list
    cofaces: dict  # (m, j) -> map m -> m+1
    codegeneracies: dict  # (m, j) -> map m+1 -> m

    @property
    def p(self) -> int:
        return self.prism.p

    @property
    def params(self) -> dict:
        env = self.levels[0].envelope
        return {"p": self.p, "N": env.precision, "K": env.depth, "D": env.degree, "L": self.L}

    def map_for(self, sigma: Sequence[int], source: int, target: int, name: str = "") -> CosimplicialMap:
        return _build_map(self, tuple(sigma), source, target, name or f"σ{tuple(sigma)}")

    def differential(self, m: int) -> list:
        """Σ_j (-1)^j d^j on level-m columns, as free target vectors."""
        src, tgt = self.levels[m], self.levels[m + 1]
        mod = self.p ** tgt.slice.N
        total = [dict() for _ in range(src.slice.size)]
        for j in range(m + 2):
            mat = self.cofaces[(m, j)].matrix(src.slice, tgt.slice, tgt.ctx)
            sign = -1 if j % 2 else 1
            for vec, img in zip(total, mat):
                for c, v in img.items():
                    nv = (vec.get(c, 0) + sign * v) % mod
                    if nv:
                        vec[c] = nv
                    else:
                        vec.pop(c, None)
        return total


def _level_presentation(A: DeltaPresentation, P: DeltaPresentation, m: int) -> DeltaPresentation:
    explicit = dict(A.ctx.explicit)
    symbols = list(A.symbols)
    relations = list(A.relations)
    for c in range(m + 1):
        ren = {g: copy_name(g, c) for g in P.symbols}
        symbols.extend(ren[g] for g in P.symbols)
        for g, dg in P.ctx.explicit.items():
            explicit[ren[g]] = rename_symbols(dg, ren)
        relations.extend(rename_symbols(r, ren) for r in P.relations)
    ctx = DeltaContext(A.ring, A.depth, explicit)
    return DeltaPresentation(ctx, tuple(symbols), tuple(relations), A.degree, A.precision)


def _z_names(P: DeltaPresentation, m: int) -> dict:
    out = {}
    for c in range(1, m + 1):
        for g in P.symbols:
            out[(c, g)] = f"z{c}" if len(P.symbols) == 1 else f"z{c}_{g}"
    return out


def _divided_differences(f: DeltaPoly, P: DeltaPresentation, a: int, b: int) -> dict:
    """Q_g with f(copy a) - f(copy b) = Σ_g (g_a - g_b)·Q_g, by telescoping over generators."""
    gens = list(P.symbols)
    out = {}
    point = {g: copy_name(g, a) for g in gens}
    prev = rename_symbols(f, point)
    ring = f.ring
    for g in gens:
        point[g] = copy_name(g, b)
        cur = rename_symbols(f, point)
        diff = DeltaPoly.var(ring, copy_name(g, a)) - DeltaPoly.var(ring, copy_name(g, b))
        out[g] = exact_divide(prev - cur, diff) if prev != cur else DeltaPoly.zero(ring)
        prev = cur
    return out


def _build_map(C: CosimplicialRing, sigma: tuple, source: int, target: int, name: str) -> CosimplicialMap:
    src, tgt = C.levels[source], C.levels[target]
    P = C.P
    ring = C.prism.A.ring
    images: dict = {}
    for c in range(source + 1):
        for g in P.symbols:
            images[copy_name(g, c)] = DeltaPoly.var(ring, copy_name(g, sigma[c]))

    def z(c, g):
        return DeltaPoly.zero(ring) if c == 0 else DeltaPoly.var(ring, tgt.z_names[(c, g)])

    for (c, g), zname in src.z_names.items():
        images[zname] = z(sigma[c], g) - z(sigma[0], g)
    s0 = sigma[0]
    for x, y in zip(C.seq, src.y_names):
        img = DeltaPoly.var(ring, y)
        if s0 != 0:
            for g, q in _divided_differences(x, P, 0, s0).items():
                img = img - z(s0, g) * q
        images[y] = img
    return CosimplicialMap(name, source, target, sigma, images)


def build_cech(prism: Prism, P: DeltaPresentation, seq: Sequence[DeltaPoly], L: int = 1,
               depth: int | None = None, degree: int | None = None,
               precision: int | None = None) -> CosimplicialRing:
    """Levels 0..L of the Čech nerve of P -> R = P/(d, seq), as envelopes on a slice.

    ``seq`` is written in A's generators and P's generators (uncopied).
    """
    if L not in (0, 1, 2):
        raise ValueError("L must be 0, 1 or 2")
    A = prism.A.with_dials(depth, degree, precision)
    P = P.with_dials(A.depth, A.degree, A.precision)
    clash = set(A.symbols) & set(P.symbols)
    if clash:
        raise ValueError(f"generators {sorted(clash)} appear in both A and P")
    seq = tuple(x.lift() for x in seq)
    y_names = default_names(len(seq)) if seq else ()
    levels = []
    for m in range(L + 1):
        pres = _level_presentation(A, P, m)
        zn = _z_names(P, m)
        ren0 = {g: copy_name(g, 0) for g in P.symbols}
        gens = [rename_symbols(x, ren0) for x in seq]
        ring = A.ring
        for (c, g) in zn:
            gens.append(DeltaPoly.var(ring, copy_name(g, 0)) - DeltaPoly.var(ring, copy_name(g, c)))
        env = envelope_regular(Prism(pres, prism.d), gens, names=y_names + tuple(zn.values()))
        levels.append(CechLevel(m, env, y_names, zn))
    C = CosimplicialRing(Prism(A, prism.d), P, seq, L, levels, {}, {})
    for m in range(L):
        for j in range(m + 2):
            C.cofaces[(m, j)] = _build_map(C, coface_sigma(m, j), m, m + 1, f"d{j}@{m}")
        for j in range(m + 1):
            C.codegeneracies[(m, j)] = _build_map(C, codegeneracy_sigma(m, j), m + 1, m, f"s{j}@{m}")
    return C


# ---------------------------------------------------------------- checks


def _compose(sigma_g: tuple, sigma_f: tuple) -> tuple:
    return tuple(sigma_g[c] for c in sigma_f)


def check_cosimplicial(C: CosimplicialRing) -> bool:
    """Every composite of two structure maps equals the map of the composite σ on generators.

    This covers d^j d^i = d^i d^(j-1), s^j s^i = s^i s^(j+1), the mixed
    identities and s^j d^j = s^j d^(j+1) = id, compared after normal form.
    """
    maps = list(C.cofaces.values()) + list(C.codegeneracies.values())
    for f, g in itertools.product(maps, repeat=2):
        if f.target != g.source:
            continue
        src, tgt = C.levels[f.source], C.levels[g.target]
        mid_ctx = C.levels[f.target].ctx
        direct = C.map_for(_compose(g.sigma, f.sigma), f.source, g.target)
        for v in src.slice.variables:
            if src.slice.weight(((v.symbol, v.level, 1),)) > src.slice.D:
                continue
            composite = g.apply(f.var_image(v, mid_ctx), tgt.ctx)
            expected = direct.var_image(v, tgt.ctx)
            try:
                if not tgt.slice.is_zero(composite - expected):
                    return False
            except DegreeExceeded:
                if composite != expected:
                    return False
    return True


def maps_well_defined(C: CosimplicialRing) -> bool:
    """Cofaces send the relation span of each slice into the next one."""
    for (m, _), f in C.cofaces.items():
        src, tgt = C.levels[m], C.levels[m + 1]
        mat = f.matrix(src.slice, tgt.slice, tgt.ctx)
        for row in src.slice.basis.row_list():
            img: dict = {}
            for c, v in row.items():
                for k, w in mat[c].items():
                    img[k] = img.get(k, 0) + v * w
            if not tgt.slice.basis.contains(img):
                return False
    return True


def _apply_linear(mat: list, vec: dict) -> dict:
    out: dict = {}
    for c, v in vec.items():
        for k, w in mat[c].items():
            out[k] = out.get(k, 0) + v * w
    return out


def differential_squares_to_zero(C: CosimplicialRing) -> bool:
    for m in range(C.L - 1):
        first = C.differential(m)
        second = C.differential(m + 1)
        tgt = C.levels[m + 2].slice
        for vec in first:
            if not tgt.basis.contains(_apply_linear(second, vec)):
                return False
    return True


def _relation_basis(level: CechLevel) -> HowellBasis:
    return level.slice.basis.copy()


def cohomology_lengths(C: CosimplicialRing) -> list:
    """(i, log_p |H^i|) on the slice for i = 0..L-1 (the dimension when N = 1)."""
    out = []
    for i in range(C.L):
        src, tgt = C.levels[i], C.levels[i + 1]
        cycles = kernel(C.differential(i), tgt.slice.basis, C.p, src.slice.N, tgt.slice.size)
        bnd = _relation_basis(src)
        if i > 0:
            bnd.extend(C.differential(i - 1))
        out.append((i, cycles.length() - bnd.length()))
    return out


def cohomology_ranks(C: CosimplicialRing) -> list:
    if C.L < 1:
        raise ValueError("cohomology needs at least two levels")
    return cohomology_lengths(C)


@dataclass
class H0Comparison:
    h0_length: int
    envelope_length: int
    cocycles: bool
    injective: bool

    @property
    def ok(self) -> bool:
        return self.cocycles and self.injective and self.h0_length == self.envelope_length


def compare_h0(C: CosimplicialRing) -> H0Comparison:
    """H^0 of the complex against the envelope of the part of seq living in A.

    The envelope maps into level 0; its image must consist of cocycles,
    be injective and have the length of H^0.
    """
    A = C.prism.A
    base = set(A.symbols)
    keep = [i for i, x in enumerate(C.seq) if x.symbols() <= base]
    ref = envelope_regular(C.prism, [C.seq[i] for i in keep])
    level0 = C.levels[0]
    images = {ref.new_generators[k]: DeltaPoly.var(A.ring, level0.y_names[i]) for k, i in enumerate(keep)}
    to_level0 = CosimplicialMap("ref", -1, 0, (), images)
    mat = to_level0.matrix(ref.slice, level0.slice, level0.ctx)
    image_span = level0.slice.basis.copy().extend(mat)
    injective = image_span.length() - level0.slice.basis.length() == ref.slice_length()
    h0 = cohomology_lengths(C)[0][1] if C.L >= 1 else level0.slice.length()
    cocycles = True
    if C.L >= 1:
        diff = C.differential(0)
        tgt = C.levels[1].slice
        cocycles = all(tgt.basis.contains(_apply_linear(diff, v)) for v in mat)
    return H0Comparison(h0, ref.slice_length(), cocycles, injective)


# ---------------------------------------------------------------- Hodge–Tate


@dataclass
class HodgeTateTable:
    params: dict
    rows: list  # (i, measured, predicted, twist)

    def matches(self) -> bool:
        return all(m == p for _, m, p, _ in self.rows)

    def to_json(self) -> list:
        return [[i, m, t] for i, m, _, t in self.rows]


def predicted_rank(i: int, k: int) -> int:
    if k == 0:
        return 1 if i == 0 else 0
    return comb(i + k - 1, k - 1)


def hodge_tate_ranks(env: EnvelopePresentation, max_weight: int) -> HodgeTateTable:
    """Conjugate-filtration increments of the envelope modulo (p, d).

    F_i is spanned by monomials whose adjoined-generator part has δ-degree
    <= i; its image in the mod (p, d) slice of degree max_weight is measured.
    """
    p = env.p
    variables = env.presentation.slice_variables()
    sl = SliceRing(variables, list(env.closed) + [env.prism.d], max_weight, 1, p)
    new = set(env.new_generators)

    def y_degree(mono):
        return sum(e * p ** l for s, l, e in mono if s in new)

    base_len = sl.basis.length()
    k = len(env.new_generators)
    rows, prev = [], 0
    for i in range(max_weight + 1):
        hb = sl.basis.copy()
        for c, mono in enumerate(sl.columns):
            if y_degree(mono) <= i:
                hb.insert({c: 1})
        dim = hb.length() - base_len
        rows.append((i, dim - prev, predicted_rank(i, k), -i))
        prev = dim
    params = {"p": p, "N": 1, "K": env.depth, "D": max_weight}
    return HodgeTateTable(params, rows)


def cech_report(C: CosimplicialRing, hodge_weight: int | None = None) -> dict:
    levels = [
        {
            "level": lv.m,
            "generators": list(lv.envelope.generators),
            "slice_dimension": lv.envelope.slice_dimension(),
            "slice_length": lv.envelope.slice_length(),
        }
        for lv in C.levels
    ]
    identities = check_cosimplicial(C) if C.L >= 1 else True
    h = cohomology_ranks(C) if C.L >= 1 else []
    if hodge_weight is None:
        # degrees >= p^K see monomials whose relations need a deeper delta
        weight = min(C.params["D"], C.params["p"] ** C.params["K"] - 1)
    else:
        weight = hodge_weight
    ht = hodge_tate_ranks(C.levels[0].envelope, weight)
    return {
        "params": C.params,
        "levels": levels,
        "identities_ok": identities,
        "differential_squared_zero": differential_squares_to_zero(C),
        "h_ranks": [[i, r] for i, r in h],
        "h0_matches_envelope": compare_h0(C).ok if C.L >= 1 else True,
        "hodge_tate": ht.to_json(),
    }
