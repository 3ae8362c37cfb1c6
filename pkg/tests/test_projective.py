from __future__ import annotations

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from igusa.exact import PolyRing, QuadExtScalar
from igusa.projective import (
    AmbientMismatch,
    ProjPoint,
    ProjSubspace,
    SamplingExhausted,
    is_smooth_point,
    line_restriction,
    restrict,
    sample_point_on,
    singularity_test,
)

P3 = PolyRing.of("x0 x1 x2 x3")
x0, x1, x2, x3 = P3.gens()

small = st.integers(-5, 5)
vec4 = st.tuples(small, small, small, small).filter(any)


def test_points_compare_up_to_scale():
    assert ProjPoint((2, 4, 6)) == ProjPoint((1, 2, 3))
    assert hash(ProjPoint((2, 4, 6))) == hash(ProjPoint((-1, -2, -3)))
    assert ProjPoint((1, 2, 3)) != ProjPoint((1, 2, 4))


def test_zero_vector_is_not_a_point():
    with pytest.raises(ValueError):
        ProjPoint((0, 0, 0))


def test_quadext_point_normalizes_to_rational():
    r = QuadExtScalar.sqrt(2)
    p = ProjPoint((r, r * 3, r * 0 + r))
    assert p.is_rational()
    assert p == ProjPoint((1, 3, 1))


def test_irrational_point_and_conjugate():
    r = QuadExtScalar.sqrt(5)
    p = ProjPoint((1, r, 2))
    assert not p.is_rational()
    assert p.field_discriminant() == 5
    assert p.conjugate() == ProjPoint((1, -r, 2))


def test_subspace_dimensions():
    L = ProjSubspace.span_of([(1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0)])
    assert L.dim == 1
    assert ProjSubspace.whole(3).dim == 3
    assert ProjSubspace.from_equations([[0, 0, 1, 0]], 3).dim == 2


def test_equations_cut_out_the_subspace():
    L = ProjSubspace.span_of([(1, 2, 3, 4), (0, 1, 0, -1)])
    assert ProjSubspace.from_equations(L.equations(), 3) == L


def test_contains_point_and_subspace():
    L = ProjSubspace.span_of([(1, 0, 0, 0), (0, 1, 0, 0)])
    assert L.contains(ProjPoint((3, -2, 0, 0)))
    assert not L.contains(ProjPoint((0, 0, 1, 0)))
    assert ProjSubspace.whole(3).contains(L)


def test_ambient_mismatch():
    with pytest.raises(AmbientMismatch):
        ProjSubspace.whole(3).meet(ProjSubspace.whole(2))


@given(st.lists(vec4, min_size=1, max_size=3), st.lists(vec4, min_size=1, max_size=3))
def test_grassmann_formula(a, b):
    A, B = ProjSubspace.span_of(a), ProjSubspace.span_of(b)
    # dim(A + B) + dim(A cap B) = dim A + dim B, in vector-space dimensions
    assert (A.span(B).dim + 1) + (A.meet(B).dim + 1) == (A.dim + 1) + (B.dim + 1)


@given(st.lists(vec4, min_size=1, max_size=2), st.lists(vec4, min_size=1, max_size=2),
       st.lists(vec4, min_size=1, max_size=2))
def test_modular_law(a, b, c):
    # A contained in C implies A + (B cap C) = (A + B) cap C
    A, B, C = ProjSubspace.span_of(a), ProjSubspace.span_of(b), ProjSubspace.span_of(c)
    C = C.span(A)
    assert A.span(B.meet(C)) == A.span(B).meet(C)


def test_restrict_to_plane():
    f = x0 * x1 - x2 * x3
    H = ProjSubspace.from_equations([[1, 0, 0, 0]], 3)
    g = restrict(f, H)
    assert g.total_degree() == 2
    assert len(g.terms) == 1


def test_line_restriction_coefficients():
    assert line_restriction(x0 ** 2 - x1 * x2, (1, 0, 0, 0), (0, 1, 1, 0)) == [1, 0, -1]


def test_singularity_test_on_quadric_cone():
    cone = x0 * x1 - x2 ** 2
    vertex = singularity_test(cone, (0, 0, 0, 1))
    assert vertex.on_variety and vertex.singular and vertex.node_rank == 3
    smooth = singularity_test(cone, (1, 0, 0, 0))
    assert smooth.on_variety and not smooth.singular
    assert not singularity_test(cone, (1, 1, 0, 0)).on_variety


@given(st.integers(1, 9), st.integers(-9, 9).filter(bool))
def test_singularity_test_is_scale_invariant(k, c):
    f = x0 * x1 * x2 - x3 ** 3 + x0 ** 2 * x3
    p = (0, 0, 1, 0)
    a, b = singularity_test(f, p), singularity_test(f.scale(c), tuple(k * t for t in p))
    assert (a.singular, a.node_rank) == (b.singular, b.node_rank)


def test_is_smooth_point_requires_membership():
    with pytest.raises(ValueError):
        is_smooth_point(x0 * x1, (1, 1, 0, 0))


@given(st.integers(0, 10_000))
def test_sampled_points_lie_on_the_surface(seed):
    f = x0 ** 3 + x1 ** 3 + x2 ** 3 + x3 ** 3
    p = sample_point_on(f, seed, anchors=[(1, -1, 0, 0)])
    assert f.evaluate(p.coords) == 0


def test_sampled_point_on_quadric_may_be_irrational():
    f = x0 ** 2 + x1 ** 2 + x2 ** 2 - 3 * x3 ** 2
    p = sample_point_on(f, 3)
    assert f.evaluate(p.coords) == 0


def test_sampling_gives_up():
    # generic lines meet this quartic in four irrational points of degree four
    f = x0 ** 4 + x1 ** 4 + x2 ** 4 + x3 ** 4 + x0 * x1 * x2 * x3
    with pytest.raises(SamplingExhausted):
        sample_point_on(f, 0, max_attempts=4)


def test_json_forms():
    assert ProjPoint((2, 4)).to_json() == ["1", "2"]
    assert ProjSubspace.span_of([(1, 0, mpq(1, 2))]).to_json() == [["1", "0", "1/2"]]
