"""Geiser involutions, words of involutions and strongly fixed points."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterable, Sequence

from .cubic_surface import (
    CubicSurface,
    is_good,
    rational_points_in_box,
    third_intersection,
)
from .errors import ContainedLineError, GeometryError, GoodnessError, WellDefinednessError
from .exactfield import nullspace, rank
from .projgeom import PlaneP3, ProjPoint, as_point, collinear

DEFAULT_ALARM_THRESHOLD = 5

# Known good points on surfaces whose small boxes only contain points on lines.
KNOWN_SEEDS = {
    "F2": ((3, 4, 5, -6), (1, 6, 8, -9)),
}


def geiser_apply(S: CubicSurface, a, x) -> ProjPoint:
    """gamma_a(x): the third point where the line through a and x meets S."""
    a, x = as_point(a), as_point(x)
    if a == x:
        raise WellDefinednessError("gamma_a(a) is undefined")
    if not is_good(S, a):
        raise GoodnessError(f"centre {a} lies on a line of {S}")
    try:
        return third_intersection(S, a, x)
    except ContainedLineError as exc:
        raise GoodnessError(str(exc)) from exc


@dataclass(frozen=True)
class GeiserWord:
    surface: CubicSurface
    base_points: tuple

    def __post_init__(self):
        pts = tuple(as_point(p) for p in self.base_points)
        for p in pts:
            if not self.surface.contains(p):
                raise GeometryError(f"base point {p} is not on {self.surface}")
        object.__setattr__(self, "base_points", pts)

    def reversed(self) -> "GeiserWord":
        return GeiserWord(self.surface, tuple(reversed(self.base_points)))


@dataclass(frozen=True)
class StepRecord:
    index: int
    centre: ProjPoint
    source: ProjPoint
    image: ProjPoint | None
    distinct: bool
    good: bool
    collinear: bool
    error: str | None = None

    @property
    def defined(self) -> bool:
        return self.image is not None

    @property
    def strong(self) -> bool:
        """The step is a distinct, good, collinear triple."""
        return self.defined and self.distinct and self.good and self.collinear


@dataclass(frozen=True)
class WordTrace:
    start: ProjPoint
    word: tuple
    orbit: tuple
    steps: tuple
    failure_index: int | None

    @property
    def completed(self) -> bool:
        return self.failure_index is None

    @property
    def final(self) -> ProjPoint | None:
        return self.orbit[-1] if self.completed else None

    def to_dict(self) -> dict:
        return {
            "start": str(self.start),
            "word": [str(p) for p in self.word],
            "orbit": [str(p) for p in self.orbit],
            "failure_index": self.failure_index,
            "final": str(self.final) if self.final is not None else None,
            "steps": [
                {"index": s.index, "centre": str(s.centre), "source": str(s.source),
                 "image": str(s.image) if s.image is not None else None,
                 "distinct": s.distinct, "good": s.good, "collinear": s.collinear,
                 "error": s.error}
                for s in self.steps
            ],
        }


def evaluate_word(w: GeiserWord, x) -> WordTrace:
    """Apply gamma_{a_1}, ..., gamma_{a_n} in turn, stopping at the first undefined step."""
    S = w.surface
    x = as_point(x)
    orbit = [x]
    steps = []
    failure = None
    cur = x
    for i, a in enumerate(w.base_points):
        if cur == a:
            steps.append(StepRecord(i, a, cur, None, False, False, False, "source equals centre"))
            failure = i
            break
        try:
            nxt = third_intersection(S, a, cur)
        except GeometryError as exc:
            steps.append(StepRecord(i, a, cur, None, True, False, False, str(exc)))
            failure = i
            break
        distinct = len({cur, a, nxt}) == 3
        good = is_good(S, a) and is_good(S, cur) and is_good(S, nxt)
        steps.append(StepRecord(i, a, cur, nxt, distinct, good, collinear(cur, a, nxt)))
        orbit.append(nxt)
        cur = nxt
    return WordTrace(x, w.base_points, tuple(orbit), tuple(steps), failure)


def is_strongly_fixed(w: GeiserWord, x) -> bool:
    tr = evaluate_word(w, x)
    return tr.completed and all(s.strong for s in tr.steps) and tr.final == as_point(x)


# ---------------------------------------------------------------- coplanarity experiment


def _plane_of(points: Sequence[ProjPoint]) -> PlaneP3 | None:
    """The unique plane through the points, or None when they do not span exactly a plane."""
    rows = [p.coords for p in points]
    if rank(rows) != 3:
        return None
    return PlaneP3(nullspace(rows, 4)[0])


@dataclass
class CoplanarityReport:
    base: tuple
    fixed: list = field(default_factory=list)
    not_fixed: list = field(default_factory=list)
    rejected: list = field(default_factory=list)  # (sample, reason)
    alarm_threshold: int = DEFAULT_ALARM_THRESHOLD

    def merge(self, other: "CoplanarityReport") -> "CoplanarityReport":
        if self.base != other.base:
            raise ValueError("cannot merge reports for different quadruples")
        return CoplanarityReport(
            self.base,
            sorted(set(self.fixed) | set(other.fixed), key=ProjPoint.sort_key),
            sorted(set(self.not_fixed) | set(other.not_fixed), key=ProjPoint.sort_key),
            sorted(set(self.rejected) | set(other.rejected), key=lambda r: r[0].sort_key()),
            self.alarm_threshold,
        )

    @property
    def plane(self) -> PlaneP3 | None:
        """Plane spanned by the base points, extended by fixed samples if needed."""
        pts = list(self.base)
        if rank([p.coords for p in pts]) == 4:
            return None
        for p in self.fixed:
            if rank([q.coords for q in pts]) >= 3:
                break
            pts.append(p)
        return _plane_of(pts)

    @property
    def all_coplanar(self) -> bool:
        return rank([p.coords for p in list(self.base) + list(self.fixed)]) <= 3

    @property
    def fixed_spans_plane(self) -> bool:
        return len(self.fixed) >= 3 and rank([p.coords for p in self.fixed]) >= 3

    @property
    def exceptions(self) -> list:
        """Fixed samples off the plane of the base points."""
        pl = self.plane
        if pl is None:
            return list(self.fixed)
        return [p for p in self.fixed if not pl.contains(p)]

    @property
    def alarm(self) -> bool:
        return len(self.exceptions) > self.alarm_threshold

    def to_dict(self) -> dict:
        pl = self.plane
        return {
            "base": [str(p) for p in self.base],
            "fixed": [str(p) for p in self.fixed],
            "not_fixed": [str(p) for p in self.not_fixed],
            "rejected": [[str(p), why] for p, why in self.rejected],
            "n_fixed": len(self.fixed),
            "plane": str(pl) if pl is not None else None,
            "all_coplanar": self.all_coplanar,
            "exceptions": [str(p) for p in self.exceptions],
            "alarm": self.alarm,
            "alarm_threshold": self.alarm_threshold,
        }


def coplanarity_experiment(S: CubicSurface, a, b, c, d, sample: Iterable,
                           alarm_threshold: int = DEFAULT_ALARM_THRESHOLD) -> CoplanarityReport:
    """Split samples into strongly (a,b,c,d)-fixed points and the rest.

    Samples that are not good points of S, or coincide with a base point,
    are rejected with a reason rather than classified.
    """
    base = tuple(as_point(p) for p in (a, b, c, d))
    word = GeiserWord(S, base)
    rep = CoplanarityReport(base, alarm_threshold=alarm_threshold)
    for x in sample:
        x = as_point(x)
        if not S.contains(x):
            rep.rejected.append((x, "not on surface"))
            continue
        if x in base:
            rep.rejected.append((x, "sample equals a base point"))
            continue
        if not is_good(S, x):
            rep.rejected.append((x, "sample lies on a line of the surface"))
            continue
        (rep.fixed if is_strongly_fixed(word, x) else rep.not_fixed).append(x)
    rep.fixed.sort(key=ProjPoint.sort_key)
    rep.not_fixed.sort(key=ProjPoint.sort_key)
    rep.rejected.sort(key=lambda r: r[0].sort_key())
    return rep


# ---------------------------------------------------------------- sampling


def good_point_pool(S: CubicSurface, box: int = 8, extra_seeds: Iterable = ()) -> list[ProjPoint]:
    """Good points from a small box, known seeds (with coordinate permutations) and
    one round of third intersections among them."""
    seeds = set()
    for p in rational_points_in_box(S, box):
        seeds.add(p)
    for s in list(KNOWN_SEEDS.get(S.name, ())) + list(extra_seeds):
        for perm in set(permutations(tuple(s))):
            p = ProjPoint(perm)
            if S.contains(p):
                seeds.add(p)
    base = sorted((p for p in seeds if is_good(S, p)), key=ProjPoint.sort_key)
    pool = set(base)
    for i, p in enumerate(base):
        for q in base[i + 1:]:
            try:
                r = third_intersection(S, p, q)
            except GeometryError:
                continue
            if r not in pool and is_good(S, r):
                pool.add(r)
    return sorted(pool, key=ProjPoint.sort_key)


def random_good_pairs(S: CubicSurface, count: int, seed: int, pool: Sequence | None = None
                      ) -> list[tuple[ProjPoint, ProjPoint]]:
    """Seeded random pairs (a, x) of distinct good points with gamma_a(x) defined and != a."""
    pool = list(pool) if pool is not None else good_point_pool(S)
    if len(pool) < 2:
        raise GeometryError(f"not enough good points on {S} to sample pairs")
    rng = random.Random(seed)
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 50 * count:
            raise GeometryError("could not find enough pairs with defined steps")
        a, x = rng.sample(pool, 2)
        try:
            y = geiser_apply(S, a, x)
        except GeometryError:
            continue
        if y == a:
            continue
        out.append((a, x))
    return out
