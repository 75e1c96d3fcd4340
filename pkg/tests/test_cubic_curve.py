import itertools

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from cubic_orchard.cubic_curve import (
    CurvePoint,
    PlaneCubic,
    check_circ_identity,
    chord_op,
    cusp_curve,
    cusp_point,
    group_add,
    group_neg,
    local_expansion,
    mult_triple_bound_check,
    multiplicity,
    singular_points_rational,
)
from cubic_orchard.cubic_surface import load_surface, plane_section
from cubic_orchard.errors import (
    ContainedLineError,
    DegenerateError,
    NotOnCurveError,
    SingularPointError,
)
from cubic_orchard.exactfield import MPoly
from cubic_orchard.projgeom import PlaneP3, ProjPoint

X, Y, W = sp.symbols("x y w")


def curve(expr) -> PlaneCubic:
    poly = sp.Poly(sp.expand(expr), X, Y, W)
    return PlaneCubic(MPoly.from_dict(3, {m: int(c) for m, c in poly.terms()}))


def sympy_multiplicity(expr, p) -> int:
    """Order of the first non-vanishing partial derivative at p."""
    subs = dict(zip((X, Y, W), p))
    for k in range(4):
        for combo in itertools.combinations_with_replacement((X, Y, W), k):
            if sp.diff(expr, *combo).subs(subs) != 0 if combo else expr.subs(subs) != 0:
                return k
    return 4


CUSP = Y**2 * W - X**3
NODE = Y**2 * W - X**3 - X**2 * W
TRIPLE = X**3 - Y**3
LINES = X * Y * W
CONIC_LINE = (X**2 + Y**2 - W**2) * X
ELLIPTIC = Y**2 * W - X**3 - 17 * W**3

EXAMPLES = [
    (CUSP, (0, 0, 1), 2), (CUSP, (1, 1, 1), 1), (CUSP, (0, 1, 0), 1),
    (NODE, (0, 0, 1), 2), (NODE, (-1, 0, 1), 1),
    (TRIPLE, (0, 0, 1), 3), (TRIPLE, (1, 1, 0), 1),
    (LINES, (0, 0, 1), 2), (LINES, (1, 0, 0), 2), (LINES, (1, 1, 0), 1),
    (CONIC_LINE, (0, 1, 1), 2), (CONIC_LINE, (1, 0, 1), 1),
    (ELLIPTIC, (-2, 3, 1), 1),
]


@pytest.mark.parametrize("expr, p, expected", EXAMPLES)
def test_multiplicity_examples_agree_with_derivative_oracle(expr, p, expected):
    assert sympy_multiplicity(expr, p) == expected
    assert multiplicity(curve(expr), p) == expected


def test_multiplicity_off_curve():
    with pytest.raises(NotOnCurveError):
        multiplicity(curve(CUSP), (1, 2, 1))


def test_local_expansion_moves_point_to_origin():
    loc = local_expansion(curve(NODE), (0, 0, 1))
    assert loc.evaluate((0, 0)) == 0 and loc.lowest_degree() == 2


@given(st.integers(-30, 30), st.integers(-30, 30))
def test_cusp_chord_is_minus_sum(a, b):
    C = cusp_curve()
    assert chord_op(C, cusp_point(a), cusp_point(b)) == cusp_point(-a - b)


@given(st.integers(-30, 30), st.integers(-30, 30))
def test_cusp_group_is_addition(a, b):
    C, u = cusp_curve(), cusp_point(0)
    assert group_add(C, u, cusp_point(a), cusp_point(b)) == cusp_point(a + b)
    assert group_neg(C, u, cusp_point(a)) == cusp_point(-a)


@given(st.fractions(-10, 10, max_denominator=7), st.fractions(-10, 10, max_denominator=7))
def test_cusp_group_rational_parameters(a, b):
    C, u = cusp_curve(), cusp_point(0)
    assert group_add(C, u, cusp_point(a), cusp_point(b)) == cusp_point(a + b)


@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20))
def test_collinear_iff_parameters_sum_to_zero(a, b, c):
    M = sp.Matrix([list(cusp_point(t).coords) for t in (a, b, c)])
    distinct = len({a, b, c}) == 3
    if distinct:
        assert (M.det() == 0) == (a + b + c == 0)


# integral points of y^2 = x^3 + 17
E_POINTS = [(-2, 3, 1), (-2, -3, 1), (-1, 4, 1), (2, 5, 1), (4, 9, 1), (8, -23, 1), (0, 1, 0)]
e_point = st.sampled_from(E_POINTS).map(CurvePoint)


@given(e_point, e_point, e_point, e_point)
def test_elliptic_group_axioms(u, x, y, z):
    C = curve(ELLIPTIC)
    add = lambda p, q: group_add(C, u, p, q)  # noqa: E731
    assert add(x, u) == x
    assert add(x, y) == add(y, x)
    assert add(x, group_neg(C, u, x)) == u
    assert add(add(x, y), z) == add(x, add(y, z))


@given(e_point, e_point, e_point)
def test_circ_identity(u, x, y):
    assert check_circ_identity(curve(ELLIPTIC), u, x, y)


def test_tangent_chord():
    C = curve(ELLIPTIC)
    p = CurvePoint((-2, 3, 1))
    q = chord_op(C, p, p)
    assert C.contains(q)
    # the tangent at p meets C again at q, so q o p == p
    assert chord_op(C, q, p) == p


def test_chord_errors():
    with pytest.raises(SingularPointError):
        chord_op(curve(CUSP), (0, 0, 1), (1, 1, 1))
    with pytest.raises(NotOnCurveError):
        chord_op(curve(CUSP), (1, 2, 1), (1, 1, 1))
    with pytest.raises(ContainedLineError):
        chord_op(curve(LINES), (1, 0, 1), (2, 0, 1))


@pytest.mark.parametrize("expr, expected", [
    (CUSP, {(0, 0, 1)}),
    (NODE, {(0, 0, 1)}),
    (ELLIPTIC, set()),
    (X**3 + Y**3 + W**3, set()),
    (LINES, {(0, 0, 1), (0, 1, 0), (1, 0, 0)}),
    (CONIC_LINE, {(0, 1, 1), (0, -1, 1)}),
    (TRIPLE, {(0, 0, 1)}),
])
def test_singular_points(expr, expected):
    res = singular_points_rational(curve(expr))
    assert {p.coords for p in res.points} == {CurvePoint(e).coords for e in expected}
    assert res.complete


def test_singular_points_incomplete_when_irrational():
    # conic x^2 + y^2 = 2 w^2 times the line x = 0 meets it at (0 : +-sqrt 2 : 1)
    res = singular_points_rational(curve((X**2 + Y**2 - 2 * W**2) * X))
    assert not res.points and not res.complete


def test_singular_points_agree_with_sympy_on_sections():
    S = load_surface("F1")
    for pl in [PlaneP3.of(0, 0, 1, 0), PlaneP3.of(1, 0, 1, 0), PlaneP3.of(0, 1, 0, 1)]:
        C = plane_section(S, pl)
        expr = sum(int(c) * X**e[0] * Y**e[1] * W**e[2] for e, c in C.form.terms)
        grads = [sp.diff(expr, v) for v in (X, Y, W)]
        ref = set()
        for chart in ({W: 1}, {Y: 1, W: 0}, {X: 1, Y: 0, W: 0}):
            free = [v for v in (X, Y, W) if v not in chart]
            eqs = [g.subs(chart) for g in grads]
            for sol in sp.solve(eqs, free, dict=True) if free else [{}]:
                vals = {**chart, **sol}
                if all(g.subs(vals) == 0 for g in grads) and all(
                        sp.sympify(vals[v]).is_rational for v in (X, Y, W)):
                    ref.add(CurvePoint(tuple(vals[v] for v in (X, Y, W))).coords)
        assert {p.coords for p in singular_points_rational(C).points} == ref


def test_mult_bound():
    C = curve(LINES)
    assert mult_triple_bound_check(C, (0, 0, 1), (1, 1, 0))
    assert not mult_triple_bound_check(C, (0, 0, 1), (1, 0, 0))
    assert mult_triple_bound_check(curve(ELLIPTIC), (-2, 3, 1), (2, 5, 1), (4, 9, 1))
    with pytest.raises(DegenerateError):
        mult_triple_bound_check(C, (0, 0, 1), (0, 0, 2))


def test_section_embed_project_roundtrip():
    S = load_surface("F1")
    C = plane_section(S, PlaneP3.of(0, 0, 1, 0))
    for t in range(-3, 4):
        q = ProjPoint((t, 1, 0, t**3))
        p = C.project(q.coords)
        assert C.contains(p)
        assert C.embed(p) == q


def test_reducible_section_reports_line_crossings():
    F4 = load_surface("F4")  # xyw
    C = plane_section(F4, PlaneP3.of(1, 2, -1, 3))
    res = singular_points_rational(C)
    assert res.complete
    embedded = {C.embed(p) for p in res.points}
    # pairwise crossings of x = 0, y = 0, w = 0 inside the plane x + 2y - z + 3w = 0
    assert embedded == {ProjPoint.of(0, 0, 3, 1), ProjPoint.of(1, 0, 1, 0), ProjPoint.of(0, 1, 2, 0)}
