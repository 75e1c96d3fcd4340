import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from cubic_orchard.cubic_surface import cusp_section_point as P
from cubic_orchard.cubic_surface import is_good
from cubic_orchard.exactfield import rank
from cubic_orchard.errors import GeometryError, GoodnessError, WellDefinednessError
from cubic_orchard.geiser import (
    CoplanarityReport,
    GeiserWord,
    coplanarity_experiment,
    evaluate_word,
    geiser_apply,
    good_point_pool,
    is_strongly_fixed,
    random_good_pairs,
)
from cubic_orchard.projgeom import PlaneP3, ProjPoint

nonzero = st.integers(-25, 25).filter(bool)


@pytest.fixture(scope="module")
def pool(F1):
    return good_point_pool(F1)


@given(nonzero, nonzero)
def test_cusp_section_action(F1, a, t):
    S = F1
    assume(a != t)
    assert geiser_apply(S, P(a), P(t)) == P(-t - a)


def test_involution_on_pool(F1, pool):
    for a, x in random_good_pairs(F1, 60, seed=7, pool=pool):
        y = geiser_apply(F1, a, x)
        assert geiser_apply(F1, a, y) == x


def test_involution_on_fermat(F2):
    pts = good_point_pool(F2, box=2)
    for a, x in random_good_pairs(F2, 20, seed=3, pool=pts):
        assert geiser_apply(F2, a, geiser_apply(F2, a, x)) == x


def test_apply_errors(F1):
    with pytest.raises(WellDefinednessError):
        geiser_apply(F1, P(2), P(2))
    with pytest.raises(GoodnessError):
        geiser_apply(F1, P(0), P(2))


def test_word_on_section_matches_parameter_arithmetic(F1):
    w = GeiserWord(F1, (P(1), P(3), P(4), P(7)))
    tr = evaluate_word(w, P(10))
    assert tr.completed
    assert [p for p in tr.orbit] == [P(10), P(-11), P(8), P(-12), P(5)]
    assert tr.final == P(10 + 1 - 3 + 4 - 7)


@given(nonzero, nonzero, nonzero, nonzero, st.integers(400, 1000))
def test_fixed_iff_alternating_sum_vanishes(F1, a, b, c, d, t):
    S = F1
    w = GeiserWord(S, (P(a), P(b), P(c), P(d)))
    tr = evaluate_word(w, P(t))
    assert tr.completed
    assert (tr.final == P(t)) == (a + c == b + d)


def test_strongly_fixed_requires_good_steps(F1):
    # 3 - 2 + 1 - 2 = 0, but the orbit of t = -1 passes through P(0): not strongly fixed
    w = GeiserWord(F1, (P(3), P(2), P(1), P(2)))
    tr = evaluate_word(w, P(-3))
    assert tr.completed and tr.final == P(-3)
    assert not is_strongly_fixed(w, P(-3))
    assert is_strongly_fixed(w, P(40))


def test_failure_index(F1):
    w = GeiserWord(F1, (P(2), P(5)))
    tr = evaluate_word(w, P(2))
    assert tr.failure_index == 0 and not tr.completed and tr.final is None
    tr = evaluate_word(w, P(-7))  # first step lands on P(5)
    assert tr.failure_index == 1
    assert tr.to_dict()["failure_index"] == 1


def test_base_points_must_lie_on_surface(F1):
    with pytest.raises(GeometryError):
        GeiserWord(F1, ((1, 1, 1, 1),))


@given(st.lists(nonzero, min_size=1, max_size=6), st.integers(400, 1000))
def test_reversed_word_inverts(F1, params, t):
    S = F1
    w = GeiserWord(S, tuple(P(a) for a in params))
    y = evaluate_word(w, P(t)).final
    assert evaluate_word(w.reversed(), y).final == P(t)


def test_reversed_word_inverts_off_section(F1, pool):
    w = GeiserWord(F1, tuple(pool[:4]))
    for x in pool[10:20]:
        tr = evaluate_word(w, x)
        if tr.completed:
            back = evaluate_word(w.reversed(), tr.final)
            if back.completed:
                assert back.final == x


def test_coplanarity_on_section(F1):
    rep = coplanarity_experiment(F1, P(1), P(3), P(4), P(2), [P(t) for t in range(20, 40)])
    assert len(rep.fixed) == 20 and not rep.not_fixed
    assert rep.plane == PlaneP3.of(0, 0, 1, 0)
    assert rep.all_coplanar and not rep.exceptions and not rep.alarm


def test_coplanarity_perturbed(F1):
    rep = coplanarity_experiment(F1, P(1), P(3), P(4), P(3), [P(t) for t in range(20, 40)])
    assert not rep.fixed and len(rep.not_fixed) == 20


def test_coplanarity_with_pool_samples(F1, pool):
    rep = coplanarity_experiment(F1, P(1), P(3), P(4), P(2), pool)
    assert rep.plane == PlaneP3.of(0, 0, 1, 0)
    assert len(rep.exceptions) <= rep.alarm_threshold
    assert all(rep.plane.contains(p) for p in rep.fixed if p not in rep.exceptions)


def test_coplanarity_rejections(F1):
    rep = coplanarity_experiment(F1, P(1), P(3), P(4), P(2), [P(1), P(0), (1, 1, 1, 1), P(9)])
    reasons = sorted(r for _, r in rep.rejected)
    assert len(reasons) == 3
    assert rep.fixed == [P(9)]


def test_merge_is_associative_and_idempotent(F1):
    base = (P(1), P(3), P(4), P(2))
    a = coplanarity_experiment(F1, *base, [P(t) for t in range(20, 25)])
    b = coplanarity_experiment(F1, *base, [P(t) for t in range(23, 30)])
    c = coplanarity_experiment(F1, *base, [P(0), P(-50)])
    left, right = a.merge(b).merge(c), a.merge(b.merge(c))
    assert left.to_dict() == right.to_dict()
    assert a.merge(a).to_dict() == a.to_dict()
    with pytest.raises(ValueError):
        a.merge(CoplanarityReport((P(5),) * 4))


def test_alarm_threshold(F1):
    rep = CoplanarityReport(tuple(P(t) for t in (1, 2, 3, 4)), alarm_threshold=0)
    rep.fixed.append(ProjPoint.of(1, 0, -1, 1))
    assert rep.exceptions and rep.alarm


def test_pool_points_are_good(F1, pool):
    assert len(pool) >= 40
    assert all(F1.contains(p) and is_good(F1, p) for p in pool)


def test_random_pairs_are_deterministic(F1, pool):
    assert random_good_pairs(F1, 10, 1, pool) == random_good_pairs(F1, 10, 1, pool)
    with pytest.raises(GeometryError):
        random_good_pairs(F1, 3, 1, pool[:1])


@given(st.integers(1, 40))
def test_point_on_tangent_section_maps_to_centre(F1, a):
    # the chord through P(a) and P(-2a) is tangent at P(a)
    assert geiser_apply(F1, P(a), P(-2 * a)) == P(a)


def test_non_coplanar_quadruple_fixes_no_samples(F1, pool):
    base = tuple(pool[i] for i in (0, 7, 19, 33))
    assert rank([p.coords for p in base]) == 4
    rep = coplanarity_experiment(F1, *base, [P(t) for t in range(20, 30)])
    assert not rep.fixed and rep.plane is None
