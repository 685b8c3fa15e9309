import sys

import sympy
from hypothesis import settings, strategies as st

from deltaprism.coeff import CoeffRing
from deltaprism.dpoly import DeltaPoly

settings.register_profile("desk", max_examples=60, deadline=None)
settings.load_profile("desk")

SYMBOLS = ("x", "y")


@st.composite
def monomials(draw, symbols=SYMBOLS, max_level=1, max_exp=2):
    mono = []
    for s in symbols:
        for lvl in range(max_level + 1):
            e = draw(st.integers(0, max_exp))
            if e:
                mono.append((s, lvl, e))
    return tuple(mono)


@st.composite
def polys(draw, ring, symbols=SYMBOLS, max_level=1, max_exp=2, max_terms=3, coeff=9):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        m = draw(monomials(symbols, max_level, max_exp))
        terms[m] = terms.get(m, 0) + draw(st.integers(-coeff, coeff))
    return DeltaPoly(ring, terms)


def exact(p):
    return CoeffRing.exact(p)


def to_sympy(f):
    """Map x@i to the sympy symbol x_i."""
    out = sympy.Integer(0)
    for m, c in f.terms.items():
        t = sympy.Integer(c)
        for s, lvl, e in m:
            t *= sympy.Symbol(f"{s}_{lvl}") ** e
        out += t
    return sympy.expand(out)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
