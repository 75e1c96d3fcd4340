import pytest
import sympy as sp
from hypothesis import assume, given
from hypothesis import strategies as st

from cubic_orchard.errors import DegenerateError
from cubic_orchard.exactfield import GaussRat, I
from cubic_orchard.projgeom import (
    LineP3,
    PlaneP3,
    ProjPoint,
    canonical_vector,
    collinear,
    coplanar4,
    format_point,
    line_plane_meet,
    line_through,
    parse_point,
    plane_span,
    plane_through_line,
    point_on_line,
)

coord = st.integers(-9, 9)
vec = st.tuples(coord, coord, coord, coord).filter(any)
scale = st.integers(-7, 7).filter(bool)


@given(vec, scale)
def test_canonical_form_is_scale_invariant(v, k):
    assert ProjPoint(v) == ProjPoint(tuple(k * x for x in v))


@given(vec, st.sampled_from([I, 2 - I, GaussRat(0, 3)]))
def test_gaussian_multiple_of_rational_point_is_stored_rationally(v, k):
    p = ProjPoint(tuple(k * x for x in v))
    assert p == ProjPoint(v)
    assert p.is_rational()


def test_canonical_examples():
    assert canonical_vector((0, -2, 4, 6)) == (0, 1, -2, -3)
    assert canonical_vector((I, 1, 0, 0)) == (1, -I, 0, 0)
    with pytest.raises(DegenerateError):
        ProjPoint((0, 0, 0, 0))


@given(vec, vec, vec)
def test_collinear_matches_rank(p, q, r):
    assert collinear(p, q, r) == (sp.Matrix([p, q, r]).rank() <= 2)


@given(vec, vec, vec, vec)
def test_coplanar_matches_determinant(p, q, r, s):
    assert coplanar4(p, q, r, s) == (sp.Matrix([p, q, r, s]).det() == 0)


@given(vec, vec)
def test_pluecker_relation_and_incidence(p, q):
    assume(sp.Matrix([p, q]).rank() == 2)
    L = line_through(p, q)
    assert L.relation() == 0
    assert point_on_line(p, L) and point_on_line(q, L)
    mid = tuple(a + 2 * b for a, b in zip(p, q))
    assert point_on_line(mid, L)
    assert line_through(mid, q) == L


@given(vec, vec, vec, vec)
def test_plane_span_contains_points(p, q, r, s):
    assume(sp.Matrix([p, q, r]).rank() == 3)
    pl = plane_span(p, q, r)
    for x in (p, q, r):
        assert pl.contains(ProjPoint(x))
    assert pl.contains(ProjPoint(s)) == coplanar4(p, q, r, s)
    assert plane_through_line(line_through(p, q), r) == pl


def test_degenerate_constructions():
    with pytest.raises(DegenerateError):
        line_through((1, 2, 3, 4), (2, 4, 6, 8))
    with pytest.raises(DegenerateError):
        plane_span((1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0))


def test_line_plane_meet():
    pl = PlaneP3.of(0, 1, 0, 0)
    m = line_plane_meet((ProjPoint.of(1, 1, 0, 0), ProjPoint.of(0, 1, 1, 0)), pl)
    assert m == ProjPoint.of(1, 0, -1, 0)
    with pytest.raises(DegenerateError):
        line_plane_meet((ProjPoint.of(1, 0, 0, 0), ProjPoint.of(0, 0, 1, 0)), pl)


def test_point_text_roundtrip():
    p = ProjPoint((1, 2 + I, 0, -3))
    assert parse_point(format_point(p)) == p
    assert str(ProjPoint.of(2, 4, 0, 6)) == "1:2:0:3"
    assert isinstance(LineP3((0, 0, 0, 0, 0, 2)).pluecker, tuple)
