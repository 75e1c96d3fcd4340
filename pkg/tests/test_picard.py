from fractions import Fraction
from itertools import product

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from cubic_orchard.errors import ExcludedCurveError
from cubic_orchard.picard import (
    CurveClassWithMult,
    DivClass,
    DivClassBlow,
    arithmetic_genus,
    deg_mult_step,
    degree,
    enumerate_degree3_classes,
    enumerate_degree3_raw,
    genus_feasible,
    geiser_pic,
    pairing,
    pairing_checks_for_endgame,
    pushforward_curve_class,
    replay_equal_multiplicity,
)

coef = st.integers(-12, 12)
blow_class = st.builds(DivClassBlow, coef, st.tuples(*[coef] * 7))


def geiser_matrix() -> sp.Matrix:
    """Acts on coordinates (a, b_0..b_6) of D = a l - sum b_j e_j.

    Column k is the image of the k-th basis class: l -> 8l - 3E and
    e_i -> 3l - E - e_i, where E = e_0 + ... + e_6.
    """
    cols = [[8] + [3] * 7]
    for i in range(7):
        # e_i has coordinates (0, -delta_i); its image 3l - E - e_i has (3, 1 + delta_i)
        cols.append([-3] + [-1 - (j == i) for j in range(7)])
    return sp.Matrix(cols).T


def to_vec(D: DivClassBlow) -> sp.Matrix:
    return sp.Matrix([D.a, *D.b])


def test_matrix_oracle_is_an_isometry_and_involution():
    M = geiser_matrix()
    J = sp.diag(1, *([-1] * 7))
    assert M.T * J * M == J
    assert M * M == sp.eye(8)


@given(blow_class)
def test_geiser_pic_matches_matrix_oracle(D):
    assert to_vec(geiser_pic(D)) == geiser_matrix() * to_vec(D)


@given(blow_class)
def test_geiser_pic_is_an_involution(D):
    assert geiser_pic(geiser_pic(D)) == D


@given(blow_class, blow_class)
def test_geiser_pic_preserves_pairing(D, E):
    assert pairing(geiser_pic(D), geiser_pic(E)) == pairing(D, E)


def test_anticanonical_class_is_fixed():
    minus_k = DivClassBlow(3, (1,) * 7)
    assert geiser_pic(minus_k) == minus_k
    assert pairing(minus_k, minus_k) == 2


def test_basis_images():
    l, e0, *es = DivClassBlow.basis()
    assert geiser_pic(l) == DivClassBlow(8, (3,) * 7)
    assert geiser_pic(e0) == DivClassBlow(3, (2, 1, 1, 1, 1, 1, 1))
    for e in es:
        assert pairing(e, e) == -1 and pairing(geiser_pic(e), geiser_pic(e)) == -1


def test_pairing_examples():
    H = DivClass.hyperplane()
    assert pairing(H, H) == 3
    assert degree(H) == 3
    assert pairing(DivClass(1, (1, 1, 0, 0, 0, 0)), H) == 1
    assert pairing(DivClass(2, (1,) * 5 + (0,)), DivClass(1, (0,) * 6)) == 2


@given(st.integers(1, 8), st.tuples(*[st.integers(0, 3)] * 6), st.integers(0, 4))
def test_pushforward_degree_follows_the_step(a, b, m):
    C = CurveClassWithMult(DivClass(a, b), m)
    d = degree(C.cls)
    try:
        out = pushforward_curve_class(C)
    except ExcludedCurveError:
        d2, m2 = deg_mult_step(d, m)
        assert d2 <= 0 or m2 < 0
        return
    assert (degree(out.cls), out.m) == deg_mult_step(d, m)


def test_pushforward_is_an_involution_on_lines_away_from_centre():
    C = CurveClassWithMult(DivClass(1, (1, 1, 0, 0, 0, 0)), 0)  # a line not through the centre
    image = pushforward_curve_class(C)
    assert (degree(image.cls), image.m) == (2, 1)
    assert pushforward_curve_class(image) == C


def test_pushforward_excludes_lines_through_centre():
    with pytest.raises(ExcludedCurveError):
        pushforward_curve_class(CurveClassWithMult(DivClass(1, (1, 1, 0, 0, 0, 0)), 1))


@pytest.mark.parametrize("d, m, expected", [(3, 0, (6, 3)), (3, 1, (3, 1)), (6, 2, (6, 2)),
                                            (5, 3, (1, -1)), (4, 1, (5, 2))])
def test_deg_mult_step(d, m, expected):
    assert deg_mult_step(d, m) == expected


@pytest.mark.parametrize("cls, genus", [
    (DivClass(1, (0,) * 6), 0), (DivClass(3, (1,) * 6), 1), (DivClass(3, (2, 1, 1, 1, 1, 0)), 0),
    (DivClass(3, (2, 2, 2, 0, 0, 0)), -2), (DivClass(6, (2,) * 6), 4),
])
def test_arithmetic_genus(cls, genus):
    assert arithmetic_genus(cls) == genus


def test_genus_feasible():
    g = genus_feasible(DivClass.hyperplane(), [2])
    assert g.feasible and g.slack == 0
    assert not genus_feasible(DivClass.hyperplane(), [2, 2]).feasible
    assert genus_feasible(DivClass(6, (2,) * 6), [2] * 4).lhs == Fraction(4)


def brute_force_degree3():
    """Independent search: all b_i vectors up to symmetry with nonnegative genus on both sides."""
    found = {}
    for a in range(1, 4):
        top = max(a - 1, 1)
        for b in product(range(top + 1), repeat=6):
            if 3 * a - sum(b) != 3:
                continue
            key = (a, tuple(sorted(b, reverse=True)))
            pa = Fraction((a - 1) * (a - 2), 2) - sum(Fraction(x * (x - 1), 2) for x in b)
            pair = (6 - a, tuple(2 - x for x in key[1]))
            pb = Fraction((pair[0] - 1) * (pair[0] - 2), 2) - sum(Fraction(x * (x - 1), 2) for x in pair[1])
            if pa >= 0 and pb >= 0:
                found[key] = pair
    return found


def test_degree3_cases_match_brute_force():
    got = {(c.cls.a, c.cls.b): (c.paired.a, c.paired.b) for c in enumerate_degree3_classes()}
    assert got == brute_force_degree3()
    assert len(got) == 4


def test_degree3_raw_contains_negative_genus_classes():
    raw = enumerate_degree3_raw()
    assert len(raw) == 6
    negative = sorted(c.b for c in raw if arithmetic_genus(c) < 0)
    assert negative == [(2, 2, 1, 1, 0, 0), (2, 2, 2, 0, 0, 0)]


def test_degree3_paired_classes_have_degree_three():
    for c in enumerate_degree3_classes():
        assert degree(c.cls) == 3 and degree(c.paired) == 3
        assert c.planar == (c.cls == DivClass.hyperplane())


def test_endgame_pairings():
    checks = pairing_checks_for_endgame()
    assert len(checks) == 3
    for e in checks:
        assert (e.self_pairing, e.paired_self_pairing, e.cross_pairing) == (1, 1, 5)
        assert e.cross_pairing == pairing(e.cls, e.paired)


def test_equal_multiplicity_replay():
    bad = replay_equal_multiplicity(6, 2)
    assert not bad.feasible
    assert (bad.lhs, bad.best_rhs) == (5, 4)
    assert bad.best_class == DivClass(6, (2,) * 6)
    assert replay_equal_multiplicity(3, 1).feasible


def test_replay_best_class_matches_convexity_oracle():
    # for fixed a and sum(b), sum b(b-1)/2 is smallest when the b_i are as even as possible
    rep = replay_equal_multiplicity(6, 2)
    best = None
    for a in range(1, 15):
        total = 3 * a - 6
        if total < 0 or total > 6 * a:
            continue
        q, r = divmod(total, 6)
        g = arithmetic_genus(DivClass(a, (q + 1,) * r + (q,) * (6 - r)))
        best = g if best is None else max(best, g)
    assert rep.best_rhs == best


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_deg_mult_step_is_an_involution(d, m):
    assert deg_mult_step(*deg_mult_step(d, m)) == (d, m)


@given(st.integers(1, 8), st.tuples(*[st.integers(0, 3)] * 6), st.integers(0, 4))
def test_pushforward_twice_is_identity(a, b, m):
    C = CurveClassWithMult(DivClass(a, b), m)
    try:
        image = pushforward_curve_class(C)
    except ExcludedCurveError:
        return
    assert pushforward_curve_class(image) == C
