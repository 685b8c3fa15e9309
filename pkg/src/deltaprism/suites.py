"""Randomized and exhaustive invariant suites behind ``deltaprism suite``.

Every check returns a :class:`CheckResult`; cases run in index order from a
seeded generator so reports are byte-identical for a fixed seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb
from typing import Callable

from . import witt
from .coeff import CoeffRing
from .delta_ops import DeltaContext, delta, frobenius, monomial_degree_bound, substitute
from .dpoly import DeltaPoly, deg_delta, format_poly, parse_poly
from .errors import DeltaPrismError

SUITES = ("delta", "witt", "envelope", "cech")


@dataclass
class CheckResult:
    suite: str
    name: str
    cases: int
    failures: int = 0
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        detail = f"{self.cases} cases" if self.passed else f"{self.failures}/{self.cases} cases failed"
        extra = f"  ({self.note})" if self.note else ""
        return f"{status}  {self.suite}/{self.name}  {detail}{extra}"


@dataclass
class SuiteReport:
    results: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def lines(self) -> list:
        out = [r.line() for r in self.results]
        failed = sum(not r.passed for r in self.results)
        out.append(f"{len(self.results) - failed}/{len(self.results)} checks passed")
        return out

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [
                {"suite": r.suite, "name": r.name, "cases": r.cases, "failures": r.failures}
                for r in self.results
            ],
        }


def _run(suite: str, name: str, cases, predicate: Callable, note: str = "") -> CheckResult:
    count = fails = 0
    for case in cases:
        count += 1
        try:
            ok = predicate(case)
        except DeltaPrismError:
            ok = False
        if not ok:
            fails += 1
    return CheckResult(suite, name, count, fails, note)


# ---------------------------------------------------------------- generators


def random_poly(rng: random.Random, ring: CoeffRing, symbols=("x", "y"), max_level: int = 1,
                max_terms: int = 3, max_exp: int = 2, coeff_bound: int = 5) -> DeltaPoly:
    terms: dict = {}
    for _ in range(rng.randint(1, max_terms)):
        factors = []
        for s in symbols:
            for lvl in range(max_level + 1):
                if rng.random() < 0.35:
                    factors.append((s, lvl, rng.randint(1, max_exp)))
        mono = tuple(sorted(factors))
        c = rng.randint(-coeff_bound, coeff_bound) or 1
        terms[mono] = terms.get(mono, 0) + c
    return DeltaPoly(ring, terms)


def random_monomial(rng: random.Random, ring: CoeffRing, symbols=("x", "y"), max_level: int = 1,
                    max_exp: int = 3) -> DeltaPoly:
    while True:
        f = random_poly(rng, ring, symbols, max_level, 1, max_exp, 1)
        f = DeltaPoly(ring, {m: 1 for m in f.terms})
        if not f.is_constant():
            return f


# ---------------------------------------------------------------- delta


def delta_checks(p: int, seed: int, cases: int = 500) -> list:
    rng = random.Random(seed)
    ring = CoeffRing.exact(p)
    ctx = DeltaContext(ring, depth=4)
    pairs = [(random_poly(rng, ring), random_poly(rng, ring)) for _ in range(cases)]
    monos = [random_monomial(rng, ring) for _ in range(cases)]
    subs = [
        (random_poly(rng, ring), {"x": random_poly(rng, ring, ("u", "v"), 0),
                                  "y": random_poly(rng, ring, ("u", "v"), 0)})
        for _ in range(cases)
    ]
    # δ of a substituted polynomial grows quickly; keep these inputs small
    light = [
        (random_poly(rng, ring, max_exp=1), {"x": random_poly(rng, ring, ("u", "v"), 0, 2),
                                              "y": random_poly(rng, ring, ("u", "v"), 0, 2)})
        for _ in range(min(cases, 200))
    ]
    mod_ring = CoeffRing.modular(p, 3)
    mod_ctx = DeltaContext(mod_ring, depth=4)

    def lift_mod_p(f, g):
        return all(c % p == 0 for c in (frobenius(f, ctx) - f ** p).terms.values())

    def lift_mod_p_modular(f, _):
        fm = f.reduce(mod_ring)
        return all(c % p == 0 for c in (frobenius(fm, mod_ctx) - fm ** p).terms.values())

    def additive(fg):
        f, g = fg
        return frobenius(f + g, ctx) == frobenius(f, ctx) + frobenius(g, ctx)

    def multiplicative(fg):
        f, g = fg
        return frobenius(f * g, ctx) == frobenius(f, ctx) * frobenius(g, ctx)

    def degree_law(m):
        return deg_delta(delta(m, ctx)) == p * deg_delta(m)

    def degree_bound(fg):
        f, _ = fg
        d = delta(f, ctx)
        return d.is_zero() or deg_delta(d) <= p * max(0, deg_delta(f))

    def monad_bound(case):
        f, g = case
        h = substitute(f, g, ctx)
        return h.is_zero() or deg_delta(h) <= monomial_degree_bound(f, g)

    def commutes(case):
        f, g = case
        return delta(substitute(f, g, ctx), ctx) == substitute(delta(f, ctx), g, ctx)

    def round_trip(fg):
        f, _ = fg
        return parse_poly(format_poly(f), ring) == f

    def modular_agrees(fg):
        f, g = fg
        lhs = (f * g + f).reduce(mod_ring)
        return lhs == f.reduce(mod_ring) * g.reduce(mod_ring) + f.reduce(mod_ring)

    return [
        _run("delta", "frobenius-lift", pairs, lambda c: lift_mod_p(*c)),
        _run("delta", "frobenius-lift-modular", pairs, lambda c: lift_mod_p_modular(*c)),
        _run("delta", "frobenius-additive", pairs, additive),
        _run("delta", "frobenius-multiplicative", pairs, multiplicative),
        _run("delta", "degree-law-monomials", monos, degree_law),
        _run("delta", "degree-law-general", pairs, degree_bound),
        _run("delta", "monad-degree-bound", subs, monad_bound),
        _run("delta", "substitution-commutes-with-delta", light, commutes),
        _run("delta", "print-parse-round-trip", pairs, round_trip),
        _run("delta", "modular-matches-exact", pairs, modular_agrees),
    ]


# ---------------------------------------------------------------- witt


def _ghost_table_ok(p: int, n: int) -> bool:
    table = witt.build_table(p, n)
    ring = CoeffRing.exact(p)
    a = witt.WittVector(p, tuple(DeltaPoly.var(ring, f"a{i}") for i in range(n)))
    b = witt.WittVector(p, tuple(DeltaPoly.var(ring, f"b{i}") for i in range(n)))
    s = witt.WittVector(p, table.sum_polys)
    m = witt.WittVector(p, table.prod_polys)
    ga, gb = witt.ghost(a), witt.ghost(b)
    return (witt.ghost(s) == [x + y for x, y in zip(ga, gb)]
            and witt.ghost(m) == [x * y for x, y in zip(ga, gb)])


def witt_checks(p: int, seed: int, cases: int = 500) -> list:
    rng = random.Random(seed)
    ring = CoeffRing.exact(p)
    ctx = DeltaContext(ring, depth=3)
    lengths = (1, 2, 3)

    def rand_vec(n):
        return witt.WittVector(p, tuple(rng.randint(-6, 6) for _ in range(n)))

    samples = [(n, rand_vec(n), rand_vec(n)) for _ in range(cases) for n in (rng.choice(lengths),)]

    def ghost_eval(case):
        _, u, v = case
        gu, gv = witt.ghost(u), witt.ghost(v)
        return (witt.ghost(u + v) == [x + y for x, y in zip(gu, gv)]
                and witt.ghost(u * v) == [x * y for x, y in zip(gu, gv)])

    def fv(case):
        n, u, _ = case
        if n < 2:
            return True
        lhs = witt.frobenius_w(witt.verschiebung(u))
        short = witt.truncate(u, n - 1)
        return lhs == witt.witt_mul(witt.from_integer(p, short), short)

    def shifts(case):
        n, u, _ = case
        gv, gu = witt.ghost(witt.verschiebung(u)), witt.ghost(u)
        ok = gv[0] == 0 and all(gv[i] == p * gu[i - 1] for i in range(1, n))
        if n >= 2:
            gf = witt.ghost(witt.frobenius_w(u))
            ok = ok and all(gf[i] == gu[i + 1] for i in range(n - 1))
        return ok

    pairs = [(random_poly(rng, ring), random_poly(rng, ring)) for _ in range(cases)]

    def section(fg):
        f, g = fg
        sf, sg = witt.delta_to_section(ctx, f), witt.delta_to_section(ctx, g)
        return (witt.delta_to_section(ctx, f + g) == sf + sg
                and witt.delta_to_section(ctx, f * g) == sf * sg)

    fields = (p, p * p)
    return [
        _run("witt", "ghost-homomorphism", [(p, n) for n in lengths], lambda c: _ghost_table_ok(*c),
             "symbolic tables"),
        _run("witt", "ghost-evaluations", samples, ghost_eval),
        _run("witt", "frobenius-verschiebung", samples, fv),
        _run("witt", "ghost-shifts", samples, shifts),
        _run("witt", "delta-section-homomorphism", pairs, section),
        _run("witt", "perfectness", fields, lambda q: witt.perfectness_check(q, 2), "exhaustive W_2(F_q)"),
        _run("witt", "reconstruction", fields, lambda q: witt.witt_reconstruction_check(2, q)),
        _run("witt", "fiber-sequence", [(p, 2 if p == 2 else 1, 3)], lambda c: witt.fiber_sequence_check(*c),
             "exhaustive"),
    ]


# ---------------------------------------------------------------- envelope


def divided_power_dimension(p: int, degree: int) -> int:
    """dim over F_p of the span of products of γ_1, γ_p, γ_p², .. of weight <= degree.

    Computed in the γ-basis with γ_a·γ_b = C(a+b, a)·γ_(a+b), independently of
    the envelope code.
    """
    gens = []
    g = 1
    while g <= degree:
        gens.append(g)
        g *= p
    vectors = []

    def rec(i, weight, coeff):
        if i == len(gens):
            vec = [0] * (degree + 1)
            vec[weight] = coeff % p
            vectors.append(vec)
            return
        e, w, c = 0, weight, coeff
        while w <= degree:
            rec(i + 1, w, c)
            c = c * comb(w + gens[i], gens[i])
            w += gens[i]
            e += 1

    rec(0, 0, 1)
    return _rank_mod_p(vectors, p)


def _rank_mod_p(rows: list, p: int) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [v * inv % p for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def crystalline_envelope(p: int, depth: int, degree: int, precision: int):
    from .prism import DeltaPresentation, Prism, envelope_regular

    ring = CoeffRing.exact(p)
    A = DeltaPresentation.free(p, ["x"], explicit={"x": DeltaPoly.zero(ring)}, depth=depth,
                               degree=degree, precision=precision)
    prism = Prism(A, DeltaPoly.const(ring, p))
    return envelope_regular(prism, [A.element("x")])


def envelope_checks(p: int, seed: int, cases: int = 200) -> list:
    from .prism import DeltaPresentation, check_distinguished, projection_well_defined

    rng = random.Random(seed)
    ring = CoeffRing.exact(p)
    results = []
    dims = [(p, D) for D in range(0, (4 if p == 2 else 6) + 1)]
    results.append(_run(
        "envelope", "divided-power-profile", dims,
        lambda c: crystalline_envelope(c[0], 3, c[1], 1).slice_dimension() == divided_power_dimension(*c)))
    env = crystalline_envelope(p, 2, 4, 2)
    names = ("x", "y")
    samples = []
    for _ in range(cases):
        f = random_poly(rng, ring, names, 0, 3, 2, 4)
        g = random_poly(rng, ring, names, 0, 3, 2, 4)
        samples.append((f, g))

    def in_slice(f):
        return deg_delta(f) <= env.degree

    def idempotent(fg):
        f, _ = fg
        if not in_slice(f):
            return True
        nf = env.normal_form(f)
        return env.normal_form(nf) == nf

    def compatible(fg):
        f, g = fg
        if not (in_slice(f) and in_slice(g)):
            return True
        nf, ng = env.normal_form(f), env.normal_form(g)
        ok = env.normal_form(f + g) == env.normal_form(nf.lift() + ng.lift())
        if deg_delta(f * g) <= env.degree and deg_delta(nf.lift() * ng.lift()) <= env.degree:
            ok = ok and env.normal_form(f * g) == env.normal_form(nf.lift() * ng.lift())
        return ok

    results.append(_run("envelope", "normal-form-idempotent", samples, idempotent))
    results.append(_run("envelope", "normal-form-ring-compatible", samples, compatible))
    ctx = env.presentation.ctx

    def stable(r):
        dr = delta(r, ctx)
        return deg_delta(dr) > env.degree or env.normal_form(dr).is_zero()

    # δ^k(r) for k < K-1: their δ-images δ^(k+1)(r) belong to the depth-K system
    K = env.depth
    below_top = [r for i, r in enumerate(env.closed) if i % K < K - 1]
    results.append(_run("envelope", "delta-stability", below_top, stable))
    units = [u for u in range(1, 8) if u % p][:3]
    Z = DeltaPresentation.free(p, [], depth=2, degree=4, precision=3)
    results.append(_run("envelope", "distinguished-p-times-unit", units,
                        lambda u: check_distinguished(Z, DeltaPoly.const(ring, p * u))))

    results.append(_run("envelope", "monotone-refinement", [((2, 3, 1), (3, 4, 2)), ((2, 4, 1), (2, 4, 2))],
                        lambda c: projection_well_defined(crystalline_envelope(p, *c[1]),
                                                          crystalline_envelope(p, *c[0]))))
    results.append(_run("envelope", "base-change-rigidity", ["identity", "adjoin-u"],
                        lambda kind: _base_change_case(p, kind)))
    return results


def _base_change_case(p: int, kind: str) -> bool:
    from .prism import DeltaPresentation, Prism, base_change_check

    ring = CoeffRing.exact(p)
    zero = DeltaPoly.zero(ring)
    A = DeltaPresentation.free(p, ["x"], explicit={"x": zero}, depth=2, degree=4, precision=2)
    d = DeltaPoly.const(ring, p)
    x = DeltaPoly.var(ring, "x")
    if kind == "identity":
        return base_change_check(Prism(A, d), Prism(A, d), {"x": x}, [x])
    B = DeltaPresentation.free(p, ["x", "u"], explicit={"x": zero, "u": zero}, depth=2, degree=4, precision=2)
    return base_change_check(Prism(A, d), Prism(B, d), {"x": x}, [x])


# ---------------------------------------------------------------- cech


def crystalline_cech(p: int, L: int, depth: int = 2, degree: int = 4, precision: int = 1):
    from .cech import build_cech
    from .prism import DeltaPresentation, Prism

    ring = CoeffRing.exact(p)
    A = DeltaPresentation.free(p, [], depth=depth, degree=degree, precision=precision)
    P = DeltaPresentation.free(p, ["x"], explicit={"x": DeltaPoly.zero(ring)})
    return build_cech(Prism(A, DeltaPoly.const(ring, p)), P, [DeltaPoly.var(ring, "x")], L=L)


def hodge_ranks_case(p: int, k: int, max_weight: int) -> bool:
    from .filtration import hodge_regular
    from .prism import DeltaPresentation

    ring = CoeffRing.exact(p)
    names = [f"x{i + 1}" for i in range(k)]
    A = DeltaPresentation.free(p, names, explicit={s: DeltaPoly.zero(ring) for s in names},
                               depth=1, degree=2 * max_weight, precision=2)
    F = hodge_regular(A, [A.element(s) for s in names], max_weight)
    return all(r == comb(n + k - 1, k - 1) for n, r, _ in F.rank_table())


def hodge_tate_case(p: int, k: int, max_weight: int) -> bool:
    from .cech import hodge_tate_ranks
    from .prism import DeltaPresentation, Prism, envelope_regular

    ring = CoeffRing.exact(p)
    names = [f"x{i + 1}" for i in range(k)]
    A = DeltaPresentation.free(p, names, explicit={s: DeltaPoly.zero(ring) for s in names},
                               depth=3, degree=max_weight, precision=1)
    env = envelope_regular(Prism(A, DeltaPoly.const(ring, p)), [A.element(s) for s in names])
    table = hodge_tate_ranks(env, max_weight)
    return table.matches() and all(t == -i for i, _, _, t in table.rows)


def cech_checks(p: int, seed: int) -> list:
    from .cech import check_cosimplicial, cohomology_ranks, compare_h0, differential_squares_to_zero

    built = [crystalline_cech(p, L) for L in (1, 2)]
    return [
        _run("cech", "cosimplicial-identities", built, check_cosimplicial),
        _run("cech", "differential-squares-to-zero", built, differential_squares_to_zero),
        _run("cech", "h0-equals-envelope", built, lambda C: compare_h0(C).ok),
        _run("cech", "h1-vanishes", built[1:], lambda C: dict(cohomology_ranks(C))[1] == 0),
        _run("cech", "hodge-ranks", [(k, 3) for k in (1, 2)], lambda c: hodge_ranks_case(p, *c)),
        _run("cech", "hodge-tate-ranks", [(k, 3) for k in (1, 2)], lambda c: hodge_tate_case(p, *c)),
    ]


def run_suite(name: str, p: int = 2, seed: int = 0) -> SuiteReport:
    if name not in SUITES + ("all",):
        raise ValueError(f"unknown suite {name!r}")
    names = SUITES if name == "all" else (name,)
    report = SuiteReport()
    for n in names:
        if n == "delta":
            report.results.extend(delta_checks(p, seed))
        elif n == "witt":
            report.results.extend(witt_checks(p, seed))
        elif n == "envelope":
            report.results.extend(envelope_checks(p, seed))
        else:
            report.results.extend(cech_checks(p, seed))
    return report
