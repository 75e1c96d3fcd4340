from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from cubic_orchard.errors import NotARootError, UndefinedGcdError
from cubic_orchard.exactfield import (
    GaussRat,
    I,
    MPoly,
    UniPoly,
    det,
    format_scalar,
    nullspace,
    parse_scalar,
    poly_divide_out_root,
    poly_gcd,
    rank,
    rational_roots,
    simplify,
    solve,
    squarefree_part,
)

small = st.integers(-20, 20)
rat = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gauss = st.builds(GaussRat, rat, rat)


def to_sympy(x):
    if isinstance(x, GaussRat):
        return sp.Rational(x.re.numerator, x.re.denominator) + sp.I * sp.Rational(
            x.im.numerator, x.im.denominator)
    x = Fraction(x)
    return sp.Rational(x.numerator, x.denominator)


@given(gauss, gauss)
def test_gauss_arithmetic_matches_sympy(a, b):
    A, B = to_sympy(a), to_sympy(b)
    assert sp.simplify(to_sympy(a + b) - (A + B)) == 0
    assert sp.simplify(to_sympy(a - b) - (A - B)) == 0
    assert sp.simplify(to_sympy(a * b) - (A * B)) == 0
    if b != 0:
        assert sp.simplify(to_sympy(a / b) - (A / B)) == 0


@given(rat)
def test_real_gauss_equals_and_hashes_like_fraction(q):
    g = GaussRat(q, 0)
    assert g == q
    assert hash(g) == hash(q)
    assert simplify(g) == q


def test_i_squared():
    assert I * I == -1
    assert simplify(I * I) == -1
    assert (1 + I).conjugate() == 1 - I


@given(st.one_of(small, rat, gauss))
def test_scalar_text_roundtrip(x):
    assert parse_scalar(format_scalar(x)) == x


@pytest.mark.parametrize("text, value", [
    ("3", 3), ("-2/3", Fraction(-2, 3)), ("i", I), ("-i", -I), ("1+2i", 1 + 2 * I),
    ("1/2-i", Fraction(1, 2) - I),
])
def test_parse_scalar_examples(text, value):
    assert parse_scalar(text) == value


polys = st.lists(small, min_size=1, max_size=6).map(lambda c: UniPoly(tuple(c)))


@given(polys, polys)
def test_gcd_matches_sympy(p, q):
    t = sp.Symbol("t")
    if p.is_zero() and q.is_zero():
        with pytest.raises(UndefinedGcdError):
            poly_gcd(p, q)
        return
    g = poly_gcd(p, q)
    ref = sp.Poly(sp.gcd(sp.Poly(list(reversed(p.coeffs)), t), sp.Poly(list(reversed(q.coeffs)), t)), t)
    ref = ref.monic() if not ref.is_zero else ref
    assert [to_sympy(c) for c in reversed(g.coeffs)] == ref.all_coeffs()


@given(polys, polys)
def test_divmod_identity(p, q):
    if q.is_zero():
        return
    quo, rem = p.divmod(q)
    assert quo * q + rem == p
    assert rem.degree < q.degree


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=4), st.integers(1, 4))
def test_rational_roots_finds_planted_roots(roots, k):
    p = UniPoly.from_roots(roots) * UniPoly((k, 0, 1))  # t^2 + k has no rational roots
    assert sorted(rational_roots(p)) == sorted(set(roots))


def test_rational_roots_fractional():
    p = UniPoly((-1, 0, 4))  # 4t^2 - 1
    assert sorted(rational_roots(p)) == [Fraction(-1, 2), Fraction(1, 2)]


def test_divide_out_root():
    p = UniPoly.from_roots([1, 2, 3])
    assert poly_divide_out_root(p, 2) == UniPoly.from_roots([1, 3])
    with pytest.raises(NotARootError):
        poly_divide_out_root(p, 5)


def test_squarefree_part():
    p = UniPoly.from_roots([1, 1, 2, 2, 2, 5])
    assert squarefree_part(p) == UniPoly.from_roots([1, 2, 5])


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


@given(matrices)
def test_rank_and_nullspace_match_sympy(rows):
    M = sp.Matrix(rows)
    assert rank(rows) == M.rank()
    ns = nullspace(rows)
    assert len(ns) == len(rows[0]) - M.rank()
    for v in ns:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)


@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_matches_sympy(rows):
    assert det(rows) == sp.Matrix(rows).det()


def test_solve():
    cols = [(1, 0, 1), (0, 1, 1)]
    assert solve(cols, (2, 3, 5)) == (2, 3)
    assert solve(cols, (1, 1, 0)) is None


def test_mpoly_evaluate_diff_and_substitution():
    x, y, z = (MPoly.var(i, 3) for i in range(3))
    f = x * x * y - 3 * z * z * z + 2
    assert f.evaluate((2, 5, 1)) == 2 * 2 * 5 - 3 + 2
    assert f.diff(0) == 2 * x * y
    assert f.total_degree() == 3 and f.lowest_degree() == 0
    t = UniPoly((0, 1))
    assert f.evaluate((t, 1, 0)) == UniPoly((2, 0, 1))
    X, Y, Z = sp.symbols("X Y Z")
    ref = sp.diff(X**2 * Y - 3 * Z**3 + 2, Z)
    assert f.diff(2).evaluate((1, 2, 3)) == ref.subs({X: 1, Y: 2, Z: 3})
