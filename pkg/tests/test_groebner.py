from __future__ import annotations

import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from igusa.exact import MultiPoly, PolyRing
from igusa.groebner import (
    GREVLEX,
    LEX,
    Budget,
    BudgetExceeded,
    Ideal,
    MonomialOrder,
    buchberger,
    dehomogenize,
    poly_gcd,
    projective_count,
    rational_solutions,
)

from conftest import from_sympy, to_sympy

R = PolyRing.of("x y z")
x, y, z = R.gens()
SX, SY, SZ = sympy.symbols("x y z")

small = st.integers(-4, 4)
monomial = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
polys = st.dictionaries(monomial, small, min_size=1, max_size=4).map(lambda d: MultiPoly(R, d))


def _monic_set(polys_):
    return {p.monic() for p in polys_ if not p.is_zero()}


def _sympy_basis(gens, order):
    G = sympy.groebner([to_sympy(g) for g in gens], SX, SY, SZ, order=order)
    return _monic_set(from_sympy(g, R) for g in G.exprs)


CASES = [
    [x ** 2 + y ** 2 + z ** 2 - 1, x - y, y * z - 1],
    [x * y - z, y * z - x, z * x - y],
    [x ** 3 - y, y ** 2 - z * x],
    [x ** 2 - y, x ** 3 - z],
]


@pytest.mark.parametrize("gens", CASES)
@pytest.mark.parametrize("order,name", [(GREVLEX, "grevlex"), (LEX, "lex")])
def test_reduced_basis_matches_sympy(gens, order, name):
    assert _monic_set(buchberger(gens, order)) == _sympy_basis(gens, name)


@given(st.lists(polys, min_size=1, max_size=3), st.randoms(use_true_random=False))
def test_basis_independent_of_generator_order(gens, rnd):
    shuffled = list(gens)
    rnd.shuffle(shuffled)
    try:
        a = buchberger(gens, GREVLEX, Budget(max_spairs=2000))
        b = buchberger(shuffled, GREVLEX, Budget(max_spairs=2000))
    except BudgetExceeded:
        return
    assert _monic_set(a) == _monic_set(b)


@given(st.lists(polys, min_size=1, max_size=3))
def test_generators_reduce_to_zero(gens):
    try:
        gb = buchberger(gens, GREVLEX, Budget(max_spairs=2000))
    except BudgetExceeded:
        return
    assert all(gb.contains(g) for g in gens)


@given(polys.filter(lambda p: not p.is_constant()))
def test_principal_ideal_has_codimension_one(f):
    assert Ideal([f], R).dimension() == 2


def test_membership_against_sympy():
    gens = CASES[0]
    G = sympy.groebner([to_sympy(g) for g in gens], SX, SY, SZ, order="grevlex")
    probe = x * gens[0] + (y - 3) * gens[2]
    assert Ideal(gens, R).contains(probe) == G.contains(to_sympy(probe)) is True
    assert Ideal(gens, R).contains(x) == G.contains(SX) is False


def test_dimensions():
    assert Ideal([x, y], R).dimension() == 1
    assert Ideal([x * y, x * z], R).dimension() == 2
    assert Ideal([R.one()], R).dimension() == -1


def test_quotient_dimension_counts_multiplicity():
    # x^2 = 1 and y^2 = 0: two points, each of multiplicity two
    assert Ideal([x ** 2 + y ** 2 - 1, x ** 2 - y ** 2 + 2 * z - 1, z], R).quotient_dimension() == 4
    assert Ideal([y - x ** 2, y, z], R).quotient_dimension() == 2


@given(st.integers(-5, 5), st.integers(-5, 5))
def test_quotient_dimension_invariant_under_shear(a, b):
    gens = [x ** 2 + y ** 2 - 5, x * y - 2, z - 1]
    img = [x + a * y, y + b * z, z]
    sheared = [g.subs(img) for g in gens]
    assert Ideal(sheared, R).quotient_dimension() == Ideal(gens, R).quotient_dimension() == 4


def test_elimination_matches_implicitization():
    # twisted cubic: eliminate t from (x - t, y - t^2, z - t^3)
    S = PolyRing.of("t x y z")
    t, X, Y, Z = S.gens()
    elim = Ideal([X - t, Y - t ** 2, Z - t ** 3], S).eliminate(["t"])
    expected = Ideal([y - x ** 2, z - x * y], R)
    for g in elim.gens:
        assert expected.contains(g.rename(R))
    for g in expected.gens:
        assert Ideal([h.rename(R) for h in elim.gens], R).contains(g)


def test_block_order_is_an_elimination_order():
    order = MonomialOrder.elimination(R, ["x"])
    key = order.key_function(3)
    assert key((1, 0, 0)) > key((0, 5, 5))


def test_saturation_removes_component():
    # (x*y, x*z) : x^infty = (y, z)
    sat = Ideal([x * y, x * z], R).saturate(x)
    assert sat.contains(y) and sat.contains(z)
    assert not sat.contains(x)


def test_poly_gcd_matches_sympy():
    f = (x + y) ** 2 * (x - z)
    g = (x + y) * (x - z) * (y + 1)
    oracle = from_sympy(sympy.gcd(to_sympy(f), to_sympy(g)), R)
    assert poly_gcd(f, g).monic() == oracle.monic()


def test_projective_count_bezout():
    P = PolyRing.of("X Y Z")
    X, Y, Z = P.gens()
    # two conics and a cubic with a line: 4 and 6 points with multiplicity
    assert projective_count([X ** 2 + Y ** 2 - Z ** 2, X * Y - 2 * Z ** 2], random.Random(0)).count == 4
    assert projective_count([X * (Y ** 2 - Z ** 2), X ** 2 - Y * Z], random.Random(1)).count == 6


def test_projective_count_rejects_inhomogeneous():
    with pytest.raises(ValueError):
        projective_count([x + 1], random.Random(0))


def test_projective_count_with_saturation():
    P = PolyRing.of("X Y Z")
    X, Y, Z = P.gens()
    # (1:0:0) is removed by saturating with Y, leaving (0:1:0) doubled
    pc = projective_count([X * Y, Z ** 2], random.Random(0), saturate_by=Y)
    assert pc.count == 2


def test_rational_solutions():
    sols = rational_solutions(Ideal([x ** 2 - 1, y - x, z - 2], R))
    assert sorted(sols) == [(-1, -1, 2), (1, 1, 2)]


def test_dehomogenize_adds_chart():
    ideal = dehomogenize([x * y - z ** 2], [0, 0, 1])
    assert ideal.contains(z - 1)


def test_budget_exceeded():
    gens = [x ** 5 + y ** 4 + z ** 3 - 1, x ** 3 + y ** 3 + z ** 2 - 1, x * y * z - 2]
    with pytest.raises(BudgetExceeded):
        buchberger(gens, LEX, Budget(max_spairs=3))
