"""Shared fixtures and the sympy bridge used as an independent oracle."""

from __future__ import annotations

import itertools
import os

import pytest
import sympy
from hypothesis import HealthCheck, settings

from igusa.exact import MultiPoly, PolyRing

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", max_examples=15, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def to_sympy(p: MultiPoly):
    """The same polynomial as a sympy expression (rationals stay exact)."""
    syms = sympy.symbols(p.ring.names)
    out = sympy.Integer(0)
    for m, c in p.terms.items():
        term = sympy.Rational(int(c.numerator), int(c.denominator))
        for s, e in zip(syms, m):
            term *= s ** e
        out += term
    return out


def from_sympy(expr, ring: PolyRing) -> MultiPoly:
    poly = sympy.Poly(sympy.expand(expr), *sympy.symbols(ring.names))
    terms = {}
    for m, c in poly.terms():
        c = sympy.Rational(c)
        terms[tuple(m)] = (int(c.p), int(c.q))
    return MultiPoly(ring, {m: _q(*pq) for m, pq in terms.items()})


def _q(num, den):
    from gmpy2 import mpq

    return mpq(num, den)


def cone_dimension(leading) -> int:
    """Largest set of variables containing no leading monomial's support."""
    n = len(leading[0])
    best = 0
    for k in range(n + 1):
        for S in itertools.combinations(range(n), k):
            if all(any(m[i] for i in range(n) if i not in S) for m in leading):
                best = max(best, k)
    return best


def sympy_cone_dimension(exprs, gens) -> int:
    """Krull dimension of the ideal, computed entirely with sympy's Groebner bases."""
    G = sympy.groebner(exprs, *gens, order="grevlex", domain="QQ")
    if list(G.exprs) == [1]:
        return -1
    return cone_dimension([sympy.Poly(g, *gens).monoms(order="grevlex")[0] for g in G.exprs])


@pytest.fixture
def r3() -> PolyRing:
    return PolyRing.of("x y z")


# one line per acceptance criterion, printed after the run
ACCEPTANCE: dict[int, tuple[str, float, float, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, secs, limit, title = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status:4s} {secs:8.1f} s (limit {limit:.0f} s)  {title}")
