"""δ-ring presentations, prisms and envelopes of regular sequences on slices.

Relations are generated over exact integers (δ needs the p-divisions) and
only reduced modulo p^N when they enter the slice linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .coeff import CoeffRing
from .delta_ops import DeltaContext, delta, evaluate, substitute
from .dpoly import DeltaPoly, deg_delta, exact_divide, to_json
from .errors import DepthExceeded, NotDivisible, NotRegular, ParseError
from .filtration import koszul_regular
from .linalg import SliceRing


@dataclass(frozen=True)
class DeltaPresentation:
    """Generators (free or with explicit δ) and relations, plus the slice dials K, D, N."""

    ctx: DeltaContext
    symbols: tuple
    relations: tuple = ()
    degree: int = 8
    precision: int = 2

    def __post_init__(self):
        if not self.ctx.ring.is_exact:
            object.__setattr__(self, "ctx", self.ctx.with_ring(self.ctx.ring.lifted()))
        for s in self.ctx.explicit:
            if s not in self.symbols:
                raise ValueError(f"explicit δ for unknown generator {s}")
        if self.degree < 0 or self.precision < 1 or self.ctx.depth < 0:
            raise ValueError("dials must be non-negative (precision positive)")

    @classmethod
    def free(cls, p: int, symbols: Sequence[str] = (), explicit: Mapping[str, DeltaPoly] | None = None,
             relations: Sequence[DeltaPoly] = (), depth: int = 3, degree: int = 8,
             precision: int = 2) -> "DeltaPresentation":
        ring = CoeffRing.exact(p)
        ex = {s: g.lift() for s, g in (explicit or {}).items()}
        ctx = DeltaContext(ring, depth, ex)
        return cls(ctx, tuple(symbols), tuple(r.lift() for r in relations), degree, precision)

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def depth(self) -> int:
        return self.ctx.depth

    @property
    def ring(self) -> CoeffRing:
        return self.ctx.ring

    def with_dials(self, depth: int | None = None, degree: int | None = None,
                   precision: int | None = None) -> "DeltaPresentation":
        ctx = self.ctx if depth is None else DeltaContext(self.ring, depth, dict(self.ctx.explicit))
        return DeltaPresentation(ctx, self.symbols, self.relations,
                                 self.degree if degree is None else degree,
                                 self.precision if precision is None else precision)

    def element(self, text: str) -> DeltaPoly:
        f = evaluate(text, self.ctx)
        unknown = f.symbols() - set(self.symbols)
        if unknown:
            raise ValueError(f"unknown generators {sorted(unknown)}")
        return f

    def slice_variables(self) -> list:
        return self.ctx.variables(self.symbols)

    def closed_relations(self) -> tuple:
        cached = self.__dict__.get("_closed")
        if cached is None:
            cached = _closed(self.ctx, self.relations)
            object.__setattr__(self, "_closed", cached)
        return cached

    def slice(self, degree: int | None = None, precision: int | None = None,
              extra: Sequence[DeltaPoly] = ()) -> SliceRing:
        return SliceRing(self.slice_variables(), list(self.closed_relations()) + [e.lift() for e in extra],
                         self.degree if degree is None else degree,
                         self.precision if precision is None else precision, self.p)


def _closed(ctx: DeltaContext, relations: Sequence[DeltaPoly]) -> tuple:
    """r, δ(r), .., δ^(K-1)(r) for every relation (just r when K = 0)."""
    out = []
    for r in relations:
        g = r.lift()
        out.append(g)
        for _ in range(1, ctx.depth):
            g = delta(g, ctx)
            out.append(g)
    return tuple(out)


@dataclass(frozen=True)
class Prism:
    A: DeltaPresentation
    d: DeltaPoly

    def __post_init__(self):
        object.__setattr__(self, "d", self.d.lift())

    @property
    def p(self) -> int:
        return self.A.p

    def is_distinguished(self) -> bool:
        return check_distinguished(self.A, self.d)


def check_distinguished(A: DeltaPresentation, d: DeltaPoly) -> bool:
    """δ(d) invertible modulo (p, d) on the slice, with (p, d) a proper ideal."""
    d = d.lift()
    dd = delta(d, A.ctx)
    degree = max(A.degree, deg_delta(dd) if not dd.is_zero() else 0, deg_delta(d) if not d.is_zero() else 0)
    base = A.slice(degree=degree, precision=1, extra=[d])
    if base.contains_one():
        return False
    with_delta = base.extended([dd])
    return with_delta.contains({base.index[()]: 1})


def gamma_map(prism: Prism, f: DeltaPoly, names: Mapping[str, str]) -> DeltaPoly:
    """The δ-map x -> d·y for each pair x -> y in ``names``; other generators are fixed."""
    ring = prism.A.ring
    assignment = {x: prism.d * DeltaPoly.var(ring, y) for x, y in names.items()}
    return substitute(f.lift(), assignment, prism.A.ctx, strict=False)


def default_names(n: int, taken: Sequence[str] = ()) -> tuple:
    names = ("y",) if n == 1 else tuple(f"y{i + 1}" for i in range(n))
    clash = set(names) & set(taken)
    if clash:
        raise ValueError(f"generator names {sorted(clash)} are already used")
    return names


@dataclass
class EnvelopePresentation:
    """A{J/I} on a slice: A with y_i adjoined, d·y_i = x_i, closed under δ up to depth K."""

    prism: Prism
    seq: tuple
    new_generators: tuple
    relations: tuple
    closed: tuple
    slice: SliceRing
    torsion_unchecked: bool
    presentation: DeltaPresentation = field(repr=False, default=None)

    @property
    def p(self) -> int:
        return self.prism.p

    @property
    def depth(self) -> int:
        return self.presentation.depth

    @property
    def degree(self) -> int:
        return self.slice.D

    @property
    def precision(self) -> int:
        return self.slice.N

    @property
    def generators(self) -> tuple:
        return self.presentation.symbols

    def element(self, text: str) -> DeltaPoly:
        return self.presentation.element(text)

    def normal_form(self, f) -> DeltaPoly:
        if isinstance(f, str):
            f = self.element(f)
        return self.slice.normal_form(f.lift())

    def equal(self, f, g) -> bool:
        return self.normal_form(f) == self.normal_form(g)

    def slice_dimension(self) -> int:
        return self.slice.dimension()

    def slice_length(self) -> int:
        return self.slice.length()

    def report(self) -> dict:
        return {
            "params": {"p": self.p, "N": self.precision, "K": self.depth, "D": self.degree},
            "generators": list(self.generators),
            "relations": [to_json(r) for r in self.relations],
            "slice_dimension": self.slice_dimension(),
            "slice_length": self.slice_length(),
            "distinguished": self.prism.is_distinguished(),
            "torsion_unchecked": self.torsion_unchecked,
        }


def _split_by_d(seq: Sequence[DeltaPoly], d: DeltaPoly) -> list:
    """For each x_i, the quotient x_i / d when it is exact, else None."""
    out = []
    for x in seq:
        try:
            out.append(exact_divide(x.lift(), d) if not d.is_zero() else None)
        except NotDivisible:
            out.append(None)
    return out


def envelope_regular(prism: Prism, seq: Sequence[DeltaPoly], depth: int | None = None,
                     degree: int | None = None, precision: int | None = None,
                     names: Sequence[str] | None = None, check: bool = True) -> EnvelopePresentation:
    """Adjoin y_i with d·y_i = x_i and all δ^k(d·y_i - x_i), k < K, then slice."""
    A = prism.A.with_dials(depth, degree, precision)
    prism = Prism(A, prism.d)
    seq = tuple(x.lift() for x in seq)
    allowed = set(A.slice_variables())
    for x in seq:
        outside = sorted(str(v) for v in x.variables() - allowed)
        if outside:
            raise DepthExceeded(f"{', '.join(outside)} not among the variables of the presentation")
    quotients = _split_by_d(seq, prism.d)
    if check:
        rest = [x for x, q in zip(seq, quotients) if q is None]
        if rest and not koszul_regular(A, rest, degree=A.degree, precision=1, extra_relations=[prism.d]):
            raise NotRegular("sequence is not regular modulo (p, d) on the slice")
    names = tuple(names) if names is not None else default_names(len(seq), A.symbols)
    if len(names) != len(seq):
        raise ValueError("one name per sequence element")
    ring = A.ring
    rels = []
    for x, q, y in zip(seq, quotients, names):
        yv = DeltaPoly.var(ring, y)
        # when d divides x_i exactly, saturate: y_i = x_i / d
        rels.append(yv - q if q is not None else prism.d * yv - x)
    E = DeltaPresentation(A.ctx, A.symbols + names, A.relations + tuple(rels), A.degree, A.precision)
    closed = E.closed_relations()
    sl = SliceRing(E.slice_variables(), closed, A.degree, A.precision, A.p)
    return EnvelopePresentation(
        prism=prism,
        seq=seq,
        new_generators=names,
        relations=tuple(rels),
        closed=closed,
        slice=sl,
        torsion_unchecked=bool(seq),
        presentation=E,
    )


def projection_well_defined(big: EnvelopePresentation, small: EnvelopePresentation) -> bool:
    """Everything that vanishes in ``big`` in degrees <= small.D also vanishes in ``small``.

    Columns run from high to low degree, so by the Howell property the rows
    pivoting on low-degree columns span the whole low-degree part of the
    relation module.
    """
    if big.precision < small.precision or big.degree < small.degree:
        raise ValueError("the first envelope must be the larger slice")
    bs, ss = big.slice, small.slice
    first = next((i for i, m in enumerate(bs.columns) if bs.weight(m) <= ss.D), bs.size)
    mod = small.p ** ss.N
    for c, (_, row) in bs.basis.rows.items():
        if c < first:
            continue
        vec = {}
        for k, v in row.items():
            mono = bs.columns[k]
            if mono not in ss.index:
                return False
            vec[ss.index[mono]] = v % mod
        if not ss.basis.contains(vec):
            return False
    return True


# ---------------------------------------------------------------- base change


def _pushforward(f: DeltaPoly, mapping: Mapping[str, DeltaPoly], ctx: DeltaContext) -> DeltaPoly:
    return substitute(f.lift(), mapping, ctx, strict=False)


def check_delta_map(A: DeltaPresentation, B: DeltaPresentation, mapping: Mapping[str, DeltaPoly],
                    degree: int | None = None) -> None:
    """Raise ValueError unless A -> B, s -> mapping[s], is a map of δ-presentations on the slice."""
    missing = set(A.symbols) - set(mapping)
    if missing:
        raise ValueError(f"no image for generators {sorted(missing)}")
    degree = B.degree if degree is None else degree
    sl = B.slice(degree=degree)
    images = {s: g.lift() for s, g in mapping.items()}
    for s in A.symbols:
        if A.ctx.is_free(s):
            continue
        lhs = delta(images[s], B.ctx)
        rhs = _pushforward(A.ctx.explicit[s], images, B.ctx)
        if not sl.is_zero(lhs - rhs):
            raise ValueError(f"not a δ-map: δ(f({s})) differs from f(δ({s}))")
    for r in A.relations:
        if not sl.is_zero(_pushforward(r, images, B.ctx)):
            raise ValueError("a relation of the source does not map to zero")


def base_change_check(prism_a: Prism, prism_b: Prism, mapping: Mapping[str, DeltaPoly],
                      seq: Sequence[DeltaPoly], depth: int | None = None, degree: int | None = None,
                      precision: int | None = None) -> bool:
    """Envelope then base change agrees with base change then envelope on the slice."""
    A = prism_a.A.with_dials(depth, degree, precision)
    B = prism_b.A.with_dials(depth, degree, precision)
    if A.p != B.p:
        raise ValueError("prisms over different primes")
    check_delta_map(A, B, mapping)
    images = {s: g.lift() for s, g in mapping.items()}
    sl_b = B.slice()
    if not sl_b.is_zero(_pushforward(prism_a.d, images, B.ctx) - prism_b.d):
        raise ValueError("the map does not send d to the distinguished element of the target")
    env_a = envelope_regular(Prism(A, prism_a.d), seq)
    pushed_seq = [_pushforward(x, images, B.ctx) for x in seq]
    env_b = envelope_regular(Prism(B, prism_b.d), pushed_seq, names=env_a.new_generators)
    # E_A ⊗_A B: push every closed relation of E_A along the map, keep B's own relations
    pushed = [_pushforward(r, images, env_b.presentation.ctx) for r in env_a.closed]
    side = SliceRing(env_b.presentation.slice_variables(), list(B.closed_relations()) + pushed,
                     B.degree, B.precision, B.p)
    direct = env_b.slice
    if side.dimension() != direct.dimension() or side.length() != direct.length():
        return False
    if not (side.basis.is_subset_of(direct.basis) and direct.basis.is_subset_of(side.basis)):
        return False
    ring = B.ring
    for v in direct.variables:
        g = DeltaPoly.var(ring, v.symbol, v.level)
        if direct.weight(((v.symbol, v.level, 1),)) > direct.D:
            continue
        if side.normal_form(g) != direct.normal_form(g):
            return False
    return True


# ---------------------------------------------------------------- spec files


@dataclass
class PrismSpec:
    """Parsed contents of a prism spec file."""

    prime: int
    precision: int | None
    generators: list
    explicit: dict
    polynomial: list
    polynomial_explicit: dict
    distinguished: str
    relations: list
    depth: int | None = None
    degree: int | None = None

    def presentation(self, depth: int, degree: int, precision: int) -> DeltaPresentation:
        ctx = DeltaContext(CoeffRing.exact(self.prime), depth)
        ex = {s: evaluate(t, ctx) for s, t in self.explicit.items()}
        ctx = DeltaContext(ctx.ring, depth, ex)
        rels = tuple(evaluate(t, ctx) for t in self.relations)
        return DeltaPresentation(ctx, tuple(self.generators), rels, degree, precision)

    def prism(self, depth: int, degree: int, precision: int) -> Prism:
        A = self.presentation(depth, degree, precision)
        return Prism(A, A.element(self.distinguished) if self.generators else evaluate(self.distinguished, A.ctx))

    def polynomial_presentation(self, depth: int, degree: int, precision: int) -> DeltaPresentation:
        ctx = DeltaContext(CoeffRing.exact(self.prime), depth)
        ex = {s: evaluate(t, ctx) for s, t in self.polynomial_explicit.items()}
        return DeltaPresentation(DeltaContext(ctx.ring, depth, ex), tuple(self.polynomial), (), degree, precision)


def parse_prism_spec(text: str) -> PrismSpec:
    """Read ``key = value`` lines.

    Keys: ``prime``, ``precision``, ``depth``, ``degree``, ``distinguished``,
    ``relation`` (repeatable), ``generator NAME`` and ``polynomial NAME`` whose
    value is ``free`` or the polynomial δ(NAME). ``#`` starts a comment.
    """
    fields: dict = {"generators": [], "explicit": {}, "polynomial": [], "polynomial_explicit": {},
                    "relations": []}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        words = key.split()
        if words[0] in ("generator", "polynomial") and len(words) == 2:
            name = words[1]
            names = fields["generators"] if words[0] == "generator" else fields["polynomial"]
            if name in fields["generators"] or name in fields["polynomial"]:
                raise ParseError(f"line {lineno}: generator {name} declared twice")
            names.append(name)
            if value != "free":
                target = "explicit" if words[0] == "generator" else "polynomial_explicit"
                fields[target][name] = value
        elif key in ("prime", "precision", "depth", "degree"):
            try:
                fields[key] = int(value)
            except ValueError:
                raise ParseError(f"line {lineno}: {key} must be an integer") from None
        elif key == "distinguished":
            fields["distinguished"] = value
        elif key == "relation":
            fields["relations"].append(value)
        else:
            raise ParseError(f"line {lineno}: unknown key {key!r}")
    if "prime" not in fields:
        raise ParseError("spec is missing 'prime'")
    if "distinguished" not in fields:
        raise ParseError("spec is missing 'distinguished'")
    return PrismSpec(
        prime=fields["prime"],
        precision=fields.get("precision"),
        generators=fields["generators"],
        explicit=fields["explicit"],
        polynomial=fields["polynomial"],
        polynomial_explicit=fields["polynomial_explicit"],
        distinguished=fields["distinguished"],
        relations=fields["relations"],
        depth=fields.get("depth"),
        degree=fields.get("degree"),
    )
