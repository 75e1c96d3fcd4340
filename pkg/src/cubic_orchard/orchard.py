"""Finite point configurations: collinear-triple counting, plane concentration,
the three-planes group action and bipartite K_{d,s} combinatorics."""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .cubic_surface import CubicSurface, cusp_section_point, gradient, is_good, third_intersection
from .errors import ChartError, DegenerateError, GeometryError, SizeGuardError
from .exactfield import simplify, to_field
from .projgeom import (
    LineP3,
    PlaneP3,
    ProjPoint,
    _plane_dual,
    as_point,
    canonical_vector,
    collinear,
    line_plane_meet,
    parse_point,
    pluecker_raw,
)

DEFAULT_SUBSET_GUARD = 500_000


# ---------------------------------------------------------------- configurations


@dataclass(frozen=True)
class Config:
    points: tuple
    surface_tag: str | None = None

    def __post_init__(self):
        pts = tuple(dict.fromkeys(as_point(p) for p in self.points))
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)


def grid_config(n: int) -> Config:
    """3(2n-1)^2 points (i : a : b : 1), i in {-1, 0, 1}, |a|, |b| < n, on x^3 = x w^2."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = range(-n + 1, n)
    pts = [ProjPoint((i, a, b, 1)) for i in (-1, 0, 1) for a in rng for b in rng]
    return Config(tuple(pts), "F3")


def cusp_config(m: int) -> Config:
    """P(t) = (t : 1 : 0 : t^3) for 0 < |t| <= m."""
    if m < 1:
        raise ValueError("m must be positive")
    return Config(tuple(cusp_section_point(t) for t in range(-m, m + 1) if t != 0), "F1")


def read_points(text: str) -> Config:
    pts = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            pts.append(parse_point(line))
        except (ValueError, GeometryError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from exc
    return Config(tuple(pts))


def write_points(config: Config) -> str:
    return "".join(f"{p}\n" for p in config.points)


# ---------------------------------------------------------------- line buckets


def _int_chunk(coords: Sequence[tuple], start: int, step: int) -> dict:
    """Buckets for pairs (i, j), i = start mod step, keyed by canonical integer Pluecker vectors."""
    gcd = math.gcd
    buckets: dict = {}
    n = len(coords)
    for i in range(start, n, step):
        p0, p1, p2, p3 = coords[i]
        for j in range(i + 1, n):
            q0, q1, q2, q3 = coords[j]
            m = (p0 * q1 - p1 * q0, p0 * q2 - p2 * q0, p0 * q3 - p3 * q0,
                 p1 * q2 - p2 * q1, p1 * q3 - p3 * q1, p2 * q3 - p3 * q2)
            g = gcd(*m)
            for x in m:
                if x:
                    if x < 0:
                        g = -g
                    break
            key = (m[0] // g, m[1] // g, m[2] // g, m[3] // g, m[4] // g, m[5] // g)
            b = buckets.get(key)
            if b is None:
                buckets[key] = {i, j}
            else:
                b.add(i)
                b.add(j)
    return buckets


def _generic_chunk(coords: Sequence[tuple], start: int, step: int) -> dict:
    buckets: dict = {}
    n = len(coords)
    for i in range(start, n, step):
        for j in range(i + 1, n):
            key = canonical_vector(pluecker_raw(coords[i], coords[j]))
            buckets.setdefault(key, set()).update((i, j))
    return buckets


def _merge(into: dict, other: dict):
    for k, v in other.items():
        cur = into.get(k)
        if cur is None:
            into[k] = v
        else:
            cur |= v


@dataclass
class LineBuckets:
    """Lines through at least two configuration points, keyed by canonical Pluecker vector.

    contained[key] is evaluated only for lines with at least three points; lines
    through exactly two points never contribute triples and stay unclassified.
    """

    members: dict
    contained: dict = field(default_factory=dict)

    def line(self, key) -> LineP3:
        return LineP3(key)

    def sizes(self) -> Counter:
        return Counter(len(v) for v in self.members.values())

    def triple_keys(self) -> list:
        return sorted((k for k, v in self.members.items() if len(v) >= 3), key=_key_sort)

    def filtered_triple_keys(self) -> list:
        return [k for k in self.triple_keys() if not self.contained.get(k, False)]


def _key_sort(key):
    return LineP3(key).sort_key() if any(not isinstance(c, int) for c in key) else key


def build_buckets(config: Config, workers: int = 1) -> LineBuckets:
    coords = [p.coords for p in config.points]
    integral = all(type(c) is int for p in coords for c in p)
    chunk = _int_chunk if integral else _generic_chunk
    if workers <= 1 or len(coords) < 200:
        raw = chunk(coords, 0, 1)
    else:
        raw = {}
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futures = [ex.submit(chunk, coords, k, workers) for k in range(workers)]
            for f in futures:
                _merge(raw, f.result())
    members = {k: tuple(sorted(v)) for k, v in raw.items()}
    return LineBuckets(members)


def classify_contained(buckets: LineBuckets, config: Config, S: CubicSurface) -> None:
    """Flag triple lines lying in S using two representatives of each bucket."""
    cache: dict = {}

    def data(i):
        if i not in cache:
            p = config.points[i].coords
            cache[i] = (S(p), gradient(S, p))
        return cache[i]

    for key in buckets.triple_keys():
        i, j = buckets.members[key][:2]
        fi, gi = data(i)
        fj, gj = data(j)
        p, q = config.points[i].coords, config.points[j].coords
        buckets.contained[key] = (fi == 0 and fj == 0
                                  and sum((a * b for a, b in zip(gi, q)), 0) == 0
                                  and sum((a * b for a, b in zip(gj, p)), 0) == 0)


def _ordered(k: int) -> int:
    return k * (k - 1) * (k - 2)


@dataclass
class OrchardReport:
    n_points: int
    ordered_triples_raw: int
    ordered_triples_filtered: int
    three_rich_lines: int
    triple_lines: int
    three_rich_lines_filtered: int
    triple_lines_filtered: int
    contained_triple_lines: int
    histogram: dict
    surface: str | None = None
    best_plane: str | None = None
    best_plane_triples: int | None = None
    concentration_ratio: str | None = None
    buckets: LineBuckets | None = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "n_points": self.n_points,
            "surface": self.surface,
            "ordered_triples_raw": self.ordered_triples_raw,
            "ordered_triples_filtered": self.ordered_triples_filtered,
            "three_rich_lines": self.three_rich_lines,
            "triple_lines": self.triple_lines,
            "three_rich_lines_filtered": self.three_rich_lines_filtered,
            "triple_lines_filtered": self.triple_lines_filtered,
            "contained_triple_lines": self.contained_triple_lines,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "best_plane": self.best_plane,
            "best_plane_triples": self.best_plane_triples,
            "concentration_ratio": self.concentration_ratio,
        }

    def histogram_csv(self) -> str:
        rows = ["points_on_line,lines"]
        rows += [f"{k},{v}" for k, v in sorted(self.histogram.items())]
        return "\n".join(rows) + "\n"


def count(config: Config, surface: CubicSurface | None = None, workers: int = 1) -> OrchardReport:
    """Bucket all point pairs by line and count collinear triples.

    Without a surface the filtered counts equal the raw ones.
    """
    buckets = build_buckets(config, workers)
    if surface is not None:
        classify_contained(buckets, config, surface)
    hist = dict(sorted(buckets.sizes().items()))
    raw = filt = rich = tri = rich_f = tri_f = contained = 0
    for key, mem in buckets.members.items():
        k = len(mem)
        if k < 3:
            continue
        tri += 1
        rich += k == 3
        raw += _ordered(k)
        if buckets.contained.get(key, False):
            contained += 1
            continue
        tri_f += 1
        rich_f += k == 3
        filt += _ordered(k)
    return OrchardReport(len(config), raw, filt, rich, tri, rich_f, tri_f, contained, hist,
                         surface.name if surface is not None else None, buckets=buckets)


def brute_force_triples(config: Config, surface: CubicSurface | None = None) -> tuple[int, int]:
    """(raw, filtered) ordered collinear triple counts by scanning all point triples."""
    from .cubic_surface import line_in_surface

    raw = filt = 0
    pts = config.points
    for a, b, c in combinations(pts, 3):
        if collinear(a, b, c):
            raw += 6
            if surface is None or not line_in_surface(surface, a, b):
                filt += 6
    return raw, filt


# ---------------------------------------------------------------- plane concentration


@dataclass(frozen=True)
class PlaneConcentration:
    plane: PlaneP3
    count: int
    total: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.count, self.total) if self.total else Fraction(0)


def _plane_matrix(key: tuple) -> list[list]:
    """M with plane_through_line(line, r).dual = M r (up to scale)."""
    cols = [_plane_dual(key, tuple(1 if i == c else 0 for i in range(4))) for c in range(4)]
    return [[cols[c][r] for c in range(4)] for r in range(4)]


def _planes_python(config: Config, lines: list, weights: list) -> dict:
    totals: dict = {}
    coords = [p.coords for p in config.points]
    for key, w in zip(lines, weights):
        M = _plane_matrix(key)
        seen = set()
        for r in coords:
            d = tuple(sum((M[i][j] * r[j] for j in range(4)), 0) for i in range(4))
            if any(d):
                seen.add(canonical_vector(d))
        for pk in seen:
            totals[pk] = totals.get(pk, 0) + w
    return totals


def _planes_numpy(config: Config, lines: list, weights: list) -> dict | None:
    """Vectorized plane totals for integer configurations, restricted to the maximal planes.

    Returns None when the packed plane codes could overflow int64.
    """
    pts = np.array([p.coords for p in config.points], dtype=np.int64)
    Ms = [_plane_matrix(k) for k in lines]
    mmax = max((abs(x) for M in Ms for row in M for x in row), default=0)
    pmax = int(np.abs(pts).max()) if len(pts) else 0
    bound = 4 * mmax * pmax + 1
    width = 2 * bound + 1
    if width ** 4 >= 2 ** 62:
        return None
    Marr = np.array(Ms, dtype=np.int64)
    w_arr = np.array(weights, dtype=np.int64)
    n = len(pts)
    step = max(1, 2_000_000 // max(n, 1))
    keys_parts, w_parts = [], []
    for s in range(0, len(Ms), step):
        D = np.einsum("cij,nj->cni", Marr[s:s + step], pts).reshape(-1, 4)
        lid = np.repeat(np.arange(s, min(s + step, len(Ms))), n)
        mask = (D != 0).any(axis=1)
        D, lid = D[mask], lid[mask]
        g = np.gcd.reduce(np.abs(D), axis=1)
        D //= g[:, None]
        first = np.argmax(D != 0, axis=1)
        sign = np.sign(D[np.arange(len(D)), first])
        D *= sign[:, None]
        code = (((D[:, 0] + bound) * width + D[:, 1] + bound) * width + D[:, 2] + bound) * width \
            + D[:, 3] + bound
        uniq, inv = np.unique(code, return_inverse=True)
        packed = np.unique(lid.astype(np.int64) * len(uniq) + inv.reshape(-1))
        keys_parts.append(uniq[packed % len(uniq)])
        w_parts.append(w_arr[packed // len(uniq)])
    if not keys_parts:
        return {}
    codes, inv = np.unique(np.concatenate(keys_parts), return_inverse=True)
    sums = np.zeros(len(codes), dtype=np.int64)
    np.add.at(sums, inv.reshape(-1), np.concatenate(w_parts))
    # only the maximizers are needed by the caller
    top = sums.max()
    out = {}
    for c in codes[sums == top].tolist():
        d = []
        for _ in range(4):
            c, r = divmod(c, width)
            d.append(r - bound)
        out[tuple(reversed(d))] = int(top)
    return out


def _planes_exhaustive(config: Config, lines: list, weights: list, members: dict) -> dict:
    """Every plane spanned by three configuration points, scored by the triple lines it contains."""
    pts = config.points
    planes = set()
    for a, b, c in combinations(pts, 3):
        if not collinear(a, b, c):
            planes.add(canonical_vector(_plane_dual(pluecker_raw(a.coords, b.coords), c.coords)))
    totals = {}
    for pk in planes:
        pl = PlaneP3(pk)
        totals[pk] = sum(w for key, w in zip(lines, weights)
                         if all(pl.contains(pts[i]) for i in members[key][:2]))
    return totals


def plane_concentration(config: Config, report: OrchardReport, exhaustive: bool = False,
                        fast: bool = True) -> PlaneConcentration | None:
    """Plane carrying the most filtered ordered triples (smallest canonical dual on ties)."""
    buckets = report.buckets
    if buckets is None:
        raise ValueError("report has no line buckets attached")
    lines = buckets.filtered_triple_keys()
    if not lines:
        return None
    weights = [_ordered(len(buckets.members[k])) for k in lines]
    totals = None
    if exhaustive:
        totals = _planes_exhaustive(config, lines, weights, buckets.members)
    elif fast and all(type(c) is int for p in config.points for c in p.coords):
        totals = _planes_numpy(config, lines, weights)
    if totals is None:
        totals = _planes_python(config, lines, weights)
    if not totals:
        return None
    best = max(totals.values())
    candidates = [PlaneP3(k) for k, v in totals.items() if v == best]
    plane = min(candidates, key=PlaneP3.sort_key)
    return PlaneConcentration(plane, best, report.ordered_triples_filtered)


def attach_concentration(report: OrchardReport, conc: PlaneConcentration | None) -> OrchardReport:
    if conc is not None:
        report.best_plane = str(conc.plane)
        report.best_plane_triples = conc.count
        r = conc.ratio
        report.concentration_ratio = f"{r.numerator}/{r.denominator}"
    return report


def plane_triples_bruteforce(config: Config, plane: PlaneP3,
                             surface: CubicSurface | None = None) -> int:
    """Filtered ordered collinear triples among the configuration points on a plane."""
    sub = Config(tuple(p for p in config.points if plane.contains(p)))
    return brute_force_triples(sub, surface)[1]


# ---------------------------------------------------------------- grid oracle


def grid_transversal_triples(n: int) -> int:
    """Number of collinear triples ((-1,a,b), (0,a',b'), (1,2a'-a,2b'-b)) in grid_config(n).

    Direct scan over pairs of points on the first two planes.
    """
    lo, hi = -n + 1, n - 1
    rng = range(lo, hi + 1)
    total = 0
    for a in rng:
        for b in rng:
            for a2 in rng:
                a3 = 2 * a2 - a
                if not lo <= a3 <= hi:
                    continue
                for b2 in rng:
                    if lo <= 2 * b2 - b <= hi:
                        total += 1
    return total


# ---------------------------------------------------------------- three planes


@dataclass(frozen=True)
class ThreePlanesElement:
    """((u, v), w) acting on x = 0 by (0 : y : z : t) -> (0 : w y : z + u y : t + v y)."""

    u: object
    v: object
    w: object

    def act(self, p) -> ProjPoint:
        p = tuple(p)
        if p[0] != 0:
            raise ChartError("the action is defined on the plane x = 0")
        _, y, z, t = p
        return ProjPoint((0, simplify(self.w * y), simplify(z + self.u * y),
                          simplify(t + self.v * y)))

    def then(self, other: "ThreePlanesElement") -> "ThreePlanesElement":
        """Apply self first, then other."""
        return ThreePlanesElement(simplify(self.u + self.w * other.u),
                                  simplify(self.v + self.w * other.v),
                                  simplify(self.w * other.w))

    @classmethod
    def identity(cls) -> "ThreePlanesElement":
        return cls(0, 0, 1)

    def as_tuple(self) -> tuple:
        return ((self.u, self.v), self.w)


PLANE_X = PlaneP3.of(1, 0, 0, 0)
PLANE_Y = PlaneP3.of(0, 1, 0, 0)


def three_planes_composite(q, q2) -> ThreePlanesElement:
    """Element for p -> (map through q to y = 0, then back through q2 to x = 0)."""
    q, q2 = tuple(as_point(q).coords), tuple(as_point(q2).coords)
    if q[0] == 0 or q[1] == 0 or q2[0] == 0 or q2[1] == 0:
        raise ChartError("centres must lie off the planes x = 0 and y = 0")
    a, _, c, d = (to_field(x) / q[1] for x in q)
    _, b2, c2, d2 = (to_field(x) / q2[0] for x in q2)
    return ThreePlanesElement(simplify(c2 * a - c), simplify(d2 * a - d), simplify(b2 * a))


def three_planes_pointwise(q, q2, p, surface: CubicSurface | None = None) -> ProjPoint:
    """The same composite computed point by point.

    With a surface, each step is a third intersection (q and q2 must lie on it);
    otherwise each step meets the line with the target plane directly.
    """
    if surface is not None:
        r = third_intersection(surface, q, p)
        if not PLANE_Y.contains(r):
            raise DegenerateError("first step did not land on y = 0")
        out = third_intersection(surface, q2, r)
        if not PLANE_X.contains(out):
            raise DegenerateError("second step did not land on x = 0")
        return out
    r = line_plane_meet((as_point(q), as_point(p)), PLANE_Y)
    return line_plane_meet((as_point(q2), r), PLANE_X)


# ---------------------------------------------------------------- bipartite relations


@dataclass(frozen=True)
class BipartiteRel:
    n_left: int
    n_right: int
    edges: frozenset

    def __post_init__(self):
        e = frozenset((int(a), int(b)) for a, b in self.edges)
        for a, b in e:
            if not (0 <= a < self.n_left and 0 <= b < self.n_right):
                raise ValueError(f"edge ({a}, {b}) out of bounds")
        object.__setattr__(self, "edges", e)

    def neighbours(self) -> list[frozenset]:
        nb = [set() for _ in range(self.n_left)]
        for a, b in self.edges:
            nb[a].add(b)
        return [frozenset(s) for s in nb]


def read_relation(text: str) -> BipartiteRel:
    rows = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    rows = [r for r in rows if r]
    if not rows or len(rows[0]) != 2:
        raise ValueError("first line must give the left and right sizes")
    nl, nr = int(rows[0][0]), int(rows[0][1])
    edges = []
    for r in rows[1:]:
        if len(r) != 2:
            raise ValueError(f"bad edge line {' '.join(r)!r}")
        edges.append((int(r[0]), int(r[1])))
    return BipartiteRel(nl, nr, frozenset(edges))


def write_relation(E: BipartiteRel) -> str:
    return f"{E.n_left} {E.n_right}\n" + "".join(f"{a} {b}\n" for a, b in sorted(E.edges))


def _guard(n: int, d: int, limit: int):
    if math.comb(n, d) > limit:
        raise SizeGuardError(f"C({n},{d}) subsets exceed the limit {limit}")


def _common(nb: list, A: Iterable[int]) -> frozenset:
    it = iter(A)
    out = set(nb[next(it)])
    for a in it:
        out &= nb[a]
    return frozenset(out)


def find_K_ds(E: BipartiteRel, d: int, s: int, limit: int = DEFAULT_SUBSET_GUARD
              ) -> tuple[tuple, tuple] | None:
    """First (lexicographic) complete bipartite A x B in E with |A| = d, |B| = s."""
    if d < 1 or s < 1:
        raise ValueError("d and s must be positive")
    _guard(E.n_left, d, limit)
    nb = E.neighbours()
    cand = [a for a in range(E.n_left) if len(nb[a]) >= s]
    for A in combinations(cand, d):
        common = _common(nb, A)
        if len(common) >= s:
            return A, tuple(sorted(common)[:s])
    return None


def kds_union(E: BipartiteRel, d: int, s: int, limit: int = DEFAULT_SUBSET_GUARD) -> frozenset:
    """Edges lying in some complete bipartite d x s subrelation."""
    _guard(E.n_left, d, limit)
    nb = E.neighbours()
    out = set()
    for A in combinations(range(E.n_left), d):
        common = _common(nb, A)
        if len(common) >= s:
            out.update((a, b) for a in A for b in common)
    return frozenset(out)


def is_transversal(E: BipartiteRel, F: Iterable, d: int, s: int,
                   limit: int = DEFAULT_SUBSET_GUARD) -> bool:
    """Does F meet, for every d x s rectangle A x B in E, each row a in A somewhere in B?

    Larger rectangles only make the condition easier, so it suffices that for
    every d-set A and a in A fewer than s common neighbours of A avoid F-edges of a.
    """
    F = frozenset((int(a), int(b)) for a, b in F)
    if not F <= E.edges:
        raise ValueError("F must be a subset of E")
    _guard(E.n_left, d, limit)
    nb = E.neighbours()
    nbF = [set() for _ in range(E.n_left)]
    for a, b in F:
        nbF[a].add(b)
    for A in combinations(range(E.n_left), d):
        common = _common(nb, A)
        if len(common) < s:
            continue
        for a in A:
            if len(common - nbF[a]) >= s:
                return False
    return True


def e_s_relation(S: CubicSurface, left: Sequence[tuple], right: Sequence[tuple]) -> BipartiteRel:
    """E_S on point pairs: (x1, x2) ~ (y1, y2) when the four points are not all collinear and
    the chords x1 y1 and x2 y2 meet S again in one common z, both triples distinct and good."""
    edges = []
    for i, (x1, x2) in enumerate(left):
        for j, (y1, y2) in enumerate(right):
            if collinear(x1, x2, y1) and collinear(x1, x2, y2):
                continue
            try:
                z1 = third_intersection(S, x1, y1)
                z2 = third_intersection(S, x2, y2)
            except GeometryError:
                continue
            if z1 != z2:
                continue
            ok = all(len({as_point(x), as_point(y), z1}) == 3
                     and is_good(S, as_point(x)) and is_good(S, as_point(y)) and is_good(S, z1)
                     for x, y in ((x1, y1), (x2, y2)))
            if ok:
                edges.append((i, j))
    return BipartiteRel(len(left), len(right), frozenset(edges))
