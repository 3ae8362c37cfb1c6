from __future__ import annotations

import random

import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from igusa.exact import (
    MultiPoly,
    PolyParseError,
    PolyRing,
    QQ,
    QuadExtScalar,
    RationalMatrix,
    RingMismatch,
    det,
    exact_quotient,
    hessian_rank_at,
    is_rational_square,
    kernel,
    parse_poly,
    poly_det,
    quadratic_roots,
    rank,
    rational_roots,
    rref,
    square_analysis,
    udivmod,
    ugcd,
    umul,
    usquarefree,
)

from conftest import from_sympy, to_sympy

R = PolyRing.of("x y z")
x, y, z = R.gens()

small = st.integers(-6, 6)
monomial = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(monomial, small, max_size=6).map(lambda d: MultiPoly(R, d))
points = st.tuples(small, small, small)


# ---------------------------------------------------------------------------
# scalars and parsing
# ---------------------------------------------------------------------------


def test_qq_accepts_strings_and_fractions():
    assert QQ("3/6") == mpq(1, 2)
    assert QQ(3, 6) == mpq(1, 2)
    assert QQ(-4) == mpq(-4)


def test_rational_squares():
    assert is_rational_square(mpq(9, 4))
    assert not is_rational_square(mpq(2))
    assert not is_rational_square(mpq(-1))


def test_parse_and_print_round_trip():
    p = parse_poly("x^2*y - 3/2*z + 1", R)
    assert parse_poly(str(p), R) == p
    assert p.coeff((2, 1, 0)) == 1
    assert p.coeff((0, 0, 1)) == mpq(-3, 2)


def test_parse_rejects_garbage():
    with pytest.raises(PolyParseError):
        parse_poly("x^^2", R)


def test_ring_mismatch_is_an_error():
    S = PolyRing.of("u v")
    with pytest.raises(RingMismatch):
        x + S.gen(0)


def test_duplicate_variables_rejected():
    with pytest.raises(ValueError):
        PolyRing.of("x x")


def test_multidegree_on_graded_ring():
    G = PolyRing.of("x1 x2 y1 y2", grading=(0, 0, 1, 1))
    x1, x2, y1, y2 = G.gens()
    assert (x1 * y2 - x2 * y1).multidegree() == (1, 1)
    assert (x1 * y1 + x1 * x2).multidegree() is None


# ---------------------------------------------------------------------------
# polynomial arithmetic against sympy
# ---------------------------------------------------------------------------


@given(polys, polys)
def test_product_matches_sympy(p, q):
    assert sympy.expand(to_sympy(p * q) - to_sympy(p) * to_sympy(q)) == 0


@given(polys, polys, points)
def test_evaluation_is_a_ring_homomorphism(p, q, pt):
    assert (p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt)
    assert (p + q).evaluate(pt) == p.evaluate(pt) + q.evaluate(pt)


@given(polys)
def test_derivative_matches_sympy(p):
    X = sympy.Symbol("x")
    assert sympy.expand(to_sympy(p.diff("x")) - sympy.diff(to_sympy(p), X)) == 0


@given(polys, polys)
def test_exact_quotient_inverts_product(p, q):
    if q.is_zero():
        return
    assert exact_quotient(p * q, q) == p


def test_subs_composes():
    p = x ** 2 + y * z
    img = [y + z, z, x]
    expected = from_sympy(to_sympy(p).subs({sympy.Symbol("x"): to_sympy(img[0]),
                                            sympy.Symbol("y"): to_sympy(img[1]),
                                            sympy.Symbol("z"): to_sympy(img[2])},
                                           simultaneous=True), R)
    assert p.subs(img) == expected


def test_sympy_bridge_round_trip():
    p = parse_poly("2/3*x^3 - y*z + 5", R)
    assert from_sympy(to_sympy(p), R) == p


# ---------------------------------------------------------------------------
# quadratic extensions
# ---------------------------------------------------------------------------


def test_sqrt_of_square_is_rational():
    assert QuadExtScalar.sqrt(mpq(9, 4)) == mpq(3, 2)


def test_sqrt_normalizes_radicand():
    s = QuadExtScalar.sqrt(12)
    assert s.d == 3 and s.b == 2
    assert s * s == 12


@given(small, small, small, small, st.sampled_from([2, 3, 5, -1, -3]))
def test_quadext_norm_is_multiplicative(a, b, c, d, D):
    u, v = QuadExtScalar(a, b, D), QuadExtScalar(c, d, D)
    assert (u * v).norm() == u.norm() * v.norm()


@given(small, small.filter(bool), st.sampled_from([2, 3, 7]))
def test_quadext_inverse(a, b, D):
    u = QuadExtScalar(a, b, D)
    assert u * u.inverse() == 1


def test_quadext_rejects_square_radicand():
    with pytest.raises(ValueError):
        QuadExtScalar(1, 1, 4)


def test_quadratic_roots_are_exact():
    roots = quadratic_roots([-2, 0, 1])
    assert len(roots) == 2
    assert all(r * r == 2 for r in roots)


# ---------------------------------------------------------------------------
# univariate helpers
# ---------------------------------------------------------------------------


@given(st.lists(small, min_size=1, max_size=5), st.lists(small, min_size=1, max_size=5))
def test_udivmod_reconstructs(p, q):
    if not any(q):
        return
    quo, rem = udivmod(p, q)
    lhs = umul(quo, q)
    n = max(len(lhs), len(rem), len(p))
    pad = lambda v: [QQ(c) for c in v] + [mpq(0)] * (n - len(v))
    assert [a + b for a, b in zip(pad(lhs), pad(rem))] == pad(p)


def test_ugcd_and_squarefree_match_sympy():
    t = sympy.Symbol("t")
    f = sympy.expand((t - 1) ** 3 * (t + 2) * (2 * t - 3) ** 2)
    g = sympy.expand((t - 1) * (2 * t - 3) * (t + 5))
    fc = [int(c) for c in reversed(sympy.Poly(f, t).all_coeffs())]
    gc = [int(c) for c in reversed(sympy.Poly(g, t).all_coeffs())]
    oracle = sympy.Poly(sympy.gcd(f, g), t).monic()
    assert ugcd(fc, gc) == [mpq(sympy.Rational(c).p, sympy.Rational(c).q)
                            for c in reversed(oracle.all_coeffs())]
    assert len(usquarefree(fc)) - 1 == 3


def test_rational_roots():
    assert sorted(rational_roots([-3, 5, -2])) == [1, mpq(3, 2)]
    assert rational_roots([1, 0, 1]) == []


# ---------------------------------------------------------------------------
# linear algebra against sympy
# ---------------------------------------------------------------------------


matrices = st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=4)


@given(matrices)
def test_rank_matches_sympy(rows):
    assert rank(rows) == sympy.Matrix(rows).rank()


@given(matrices)
def test_kernel_vectors_are_annihilated(rows):
    ker = kernel(rows, 4)
    assert len(ker) == 4 - rank(rows)
    for v in ker:
        assert all(sum(QQ(a) * b for a, b in zip(r, v)) == 0 for r in rows)


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_det_matches_sympy(rows):
    assert det(rows) == int(sympy.Matrix(rows).det())


@given(matrices, st.permutations(range(4)))
def test_rank_invariant_under_column_permutation(rows, perm):
    assert rank(rows) == rank([[r[i] for i in perm] for r in rows])


def test_rref_pivots():
    R_, piv = rref([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert piv == [0, 1]


def test_rational_matrix_product():
    A = RationalMatrix.from_rows([[1, 2], [3, 4]])
    assert (A @ A.transpose()).rows() == [[5, 11], [11, 25]]
    assert A.det() == -2


def test_poly_det_matches_sympy():
    M = [[x, y, z], [y, z, x], [z, x, y + 1]]
    oracle = sympy.Matrix([[to_sympy(e) for e in r] for r in M]).det()
    assert sympy.expand(to_sympy(poly_det(M)) - oracle) == 0


# ---------------------------------------------------------------------------
# squares and Hessians
# ---------------------------------------------------------------------------


@given(polys)
def test_square_analysis_recognizes_squares(q):
    if q.is_zero():
        return
    res = square_analysis(q * q, random.Random(1))
    assert res.is_square
    assert res.sqrt * res.sqrt == q * q


def test_square_analysis_rejects_non_square():
    assert not square_analysis(x ** 2 - y ** 2).is_square
    assert not square_analysis(x * y * z ** 2).is_square


def test_squarefree_part_of_double_factor():
    res = square_analysis((x - y) ** 2 * (x + z))
    assert res.squarefree_part.total_degree() == 2


def test_hessian_rank_matches_sympy():
    f = x ** 2 * z - y ** 3 + x * y * z
    X, Y, Z = sympy.symbols("x y z")
    H = sympy.hessian(to_sympy(f), (X, Y, Z)).subs({X: 1, Y: 2, Z: -1})
    assert hessian_rank_at(f, (1, 2, -1)) == H.rank()
