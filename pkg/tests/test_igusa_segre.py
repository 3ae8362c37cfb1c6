from __future__ import annotations

import itertools

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from igusa import igusa_segre as ig
from igusa.exact import hessian_rank_at
from igusa.projective import ProjPoint, ProjSubspace

from conftest import sympy_cone_dimension, to_sympy

Z = sympy.symbols("z1:7")
ZH = Z[:5]
S1, S2, S3, S4 = (sum(v ** k for v in Z) for k in (1, 2, 3, 4))
B_SYM = S4 - S2 ** 2 / 4
CHART = {Z[5]: -sum(ZH)}
B_HAT_SYM = sympy.expand(B_SYM.subs(CHART))
C_HAT_SYM = sympy.expand(S3.subs(CHART))


@pytest.fixture(scope="module")
def built():
    return ig.build()


# ---------------------------------------------------------------------------
# the forms
# ---------------------------------------------------------------------------


def test_forms_match_independent_expressions(built):
    B, C = built
    assert sympy.expand(to_sympy(B.b) - B_SYM) == 0
    assert sympy.expand(to_sympy(B.b_hat) - B_HAT_SYM) == 0
    assert sympy.expand(to_sympy(C.c_hat) - C_HAT_SYM) == 0


@given(st.permutations(range(6)))
def test_b_and_c_are_symmetric(perm):
    B, C = ig.build()
    assert ig.permute(B.b, perm) == B.b
    assert ig.permute(C.c, perm) == C.c


def test_invariance_detects_non_symmetric_form():
    assert not ig.s6_invariance(ig.Z6.gen(0))
    assert ig.s6_invariance(ig.power_sum(2))


def test_b_value_at_a_simple_point(built):
    # s4 = 2 and s2 = 2 give 2 - 4/4
    assert built[0].b.evaluate((1, -1, 0, 0, 0, 0)) == 1


def test_chart_round_trip():
    p = ProjPoint((1, 2, -3, 0, 4, -4))
    assert ig.from_chart(ig.to_chart(p)) == p
    with pytest.raises(ValueError):
        ig.to_chart((1, 0, 0, 0, 0, 0))


# ---------------------------------------------------------------------------
# lines, triple points and the configuration
# ---------------------------------------------------------------------------


def test_fifteen_pair_partitions():
    parts = ig.pair_partitions()
    assert len(parts) == 15
    assert all(sorted(i for pair in p for i in pair) == list(range(6)) for p in parts)


def test_singular_lines_against_sympy():
    u, v = sympy.symbols("u v")
    grad = [sympy.diff(B_HAT_SYM, w) for w in ZH]
    for L in ig.singular_lines():
        (i, j), (k, l), (m, n) = L.partition
        pt = [0] * 6
        pt[i] = pt[j] = u
        pt[k] = pt[l] = v
        pt[m] = pt[n] = -u - v
        sub = dict(zip(ZH, pt[:5]))
        assert sympy.expand(B_HAT_SYM.subs(sub)) == 0
        assert all(sympy.expand(g.subs(sub)) == 0 for g in grad)
    assert len({L.line for L in ig.singular_lines()}) == 15


def test_lines_are_permuted_among_themselves():
    lines = {L.line for L in ig.singular_lines()}
    for sigma in itertools.islice(itertools.permutations(range(6)), 0, 720, 37):
        assert {ig.permute_subspace(L, sigma) for L in lines} == lines


def test_line_check_rejects_a_generic_line(built):
    L = ProjSubspace(5, ((1, -1, 0, 0, 0, 0), (0, 1, 2, -3, 0, 0)))
    assert not ig.line_is_singular(built[0].b_hat, L)


def test_cremona_richmond_incidence():
    cert = ig.triple_points_and_cremona_richmond()
    assert cert.passed
    assert set(cert.row_sums) == {3} and set(cert.col_sums) == {3}
    assert len(cert.rows) == len(cert.cols) == 15


def test_special_points_are_singular_with_rank_one_hessian():
    # independent check: the Hessian of b restricted to s1 = 0 at (-2,-2,1,1,1,1)
    H = sympy.hessian(B_HAT_SYM, ZH).subs(dict(zip(ZH, (-2, -2, 1, 1, 1))))
    grad = [sympy.diff(B_HAT_SYM, w).subs(dict(zip(ZH, (-2, -2, 1, 1, 1)))) for w in ZH]
    assert all(g == 0 for g in grad)
    assert H.rank() == 1
    cert = ig.triple_points_and_cremona_richmond()
    assert cert.witness["hessian_ranks"] == [1]
    assert cert.witness["multiplicities"] == [2]


def test_point_multiplicity():
    x = ig.Z5.gens()
    assert ig.point_multiplicity(x[0] ** 3 + x[1] ** 2 * x[2], (0, 0, 1, 0, 0)) == 2
    assert ig.point_multiplicity(x[0] ** 3, (0, 1, 0, 0, 0)) == 3


def test_segre_configuration():
    cert = ig.segre_configuration()
    assert cert.passed
    assert set(cert.row_sums) == {4} and set(cert.col_sums) == {6}
    assert (len(cert.rows), len(cert.cols)) == (15, 10)


def test_segre_nodes_against_sympy():
    for n in ig.segre_nodes():
        chart = n.coords[:5]
        sub = dict(zip(ZH, chart))
        assert all(sympy.diff(C_HAT_SYM, w).subs(sub) == 0 for w in ZH)
        assert sympy.hessian(C_HAT_SYM, ZH).subs(sub).rank() == 4
        assert hessian_rank_at(ig.build()[1].c_hat, chart) == 4


def test_jacobian_dimension_against_sympy(built):
    oracle = sympy_cone_dimension([sympy.diff(B_HAT_SYM, w) for w in ZH], ZH)
    assert ig.jacobian_dimension(built[0].b_hat) == oracle == 2


# ---------------------------------------------------------------------------
# duality
# ---------------------------------------------------------------------------


def test_dual_map_lands_in_sum_zero():
    w = ig.dual_map()
    assert sum(w, ig.Z6.zero()).is_zero()


def test_dual_contraction_certificate():
    assert all(ig.dual_contraction_certificate().values())


def test_dual_contraction_rejects_a_non_segre_plane():
    P = ProjSubspace(5, ((1, -1, 0, 0, 0, 0), (0, 1, -1, 0, 0, 0), (0, 0, 1, -1, 0, 0)))
    with pytest.raises(AssertionError):
        ig.dual_contraction(P)


def test_dual_pullback_membership_against_sympy():
    assert ig.dual_pullback_membership()
    w = [v ** 2 - S2 / 6 for v in Z]
    pulled = sympy.expand(B_SYM.subs(dict(zip(Z, w)), simultaneous=True))
    G = sympy.groebner([S3, S1], *Z, order="grevlex", domain="QQ")
    assert G.contains(pulled)


def test_dual_pullback_pointwise():
    assert ig.dual_pullback_pointwise(5, 10)


# ---------------------------------------------------------------------------
# tangent hyperplane sections
# ---------------------------------------------------------------------------


@pytest.mark.slow
def test_kummer_section_has_sixteen_singular_points():
    k = ig.kummer_section_count(0)
    assert k.count == 16
    assert k.line_hits == 15
    assert k.p_singular_on_section


def test_smooth_point_sampler(built):
    p = ig.smooth_point_of_b(3)
    assert built[0].b_hat.evaluate(p.coords) == 0
