"""Canonical points, lines (Pluecker keys) and planes of P^3.

Canonical form over Q: coprime integers, first nonzero entry positive.
Canonical form over Q(i): first nonzero entry equal to 1.  A Q(i) vector that
is proportional to a rational one is stored in the Q form, so equal projective
objects always have identical representations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DegenerateError
from .exactfield import GaussRat, format_scalar, is_gauss, parse_scalar, simplify, to_field

# Pluecker index pairs, in storage order.
PLUECKER_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
_PIDX = {pair: k for k, pair in enumerate(PLUECKER_PAIRS)}


def canonical_vector(coords: Sequence) -> tuple:
    """Normalize a nonzero homogeneous vector into canonical form."""
    if all(type(c) is int for c in coords):
        g = math.gcd(*coords)
        if g == 0:
            raise DegenerateError("zero vector has no projective class")
        first = next(c for c in coords if c)
        if first < 0:
            g = -g
        return tuple(c // g for c in coords)
    lead = next((c for c in coords if c != 0), None)
    if lead is None:
        raise DegenerateError("zero vector has no projective class")
    if any(is_gauss(c) for c in coords):
        lead = to_field(lead)
        scaled = [to_field(c) / lead for c in coords]
        if any(is_gauss(c) for c in scaled):
            return tuple(c if isinstance(c, GaussRat) else GaussRat(c) for c in scaled)
        coords = [c.re if isinstance(c, GaussRat) else c for c in scaled]
    fr = [Fraction(c.re) if isinstance(c, GaussRat) else Fraction(c) for c in coords]
    den = math.lcm(*(f.denominator for f in fr))
    return canonical_vector([int(f * den) for f in fr])


def _key_str(v: tuple) -> str:
    return ":".join(format_scalar(c) for c in v)


def _key_order(v: tuple) -> tuple:
    """Total order key for tie-breaking, usable across both fields."""
    out = []
    for c in v:
        if isinstance(c, GaussRat):
            out.append((c.re, c.im))
        else:
            out.append((Fraction(c), Fraction(0)))
    return tuple(out)


@dataclass(frozen=True, order=False)
class ProjPoint:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", canonical_vector(self.coords))

    @classmethod
    def of(cls, *coords) -> "ProjPoint":
        return cls(tuple(coords))

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def is_rational(self) -> bool:
        return not any(isinstance(c, GaussRat) for c in self.coords)

    def sort_key(self) -> tuple:
        return _key_order(self.coords)

    def __str__(self):
        return _key_str(self.coords)


@dataclass(frozen=True)
class LineP3:
    pluecker: tuple

    def __post_init__(self):
        pl = canonical_vector(self.pluecker)
        if len(pl) != 6:
            raise ValueError("Pluecker vector needs 6 entries")
        object.__setattr__(self, "pluecker", pl)

    def relation(self):
        p01, p02, p03, p12, p13, p23 = self.pluecker
        return p01 * p23 - p02 * p13 + p03 * p12

    def sort_key(self) -> tuple:
        return _key_order(self.pluecker)

    def __str__(self):
        return _key_str(self.pluecker)


@dataclass(frozen=True)
class PlaneP3:
    dual: tuple

    def __post_init__(self):
        object.__setattr__(self, "dual", canonical_vector(self.dual))

    @classmethod
    def of(cls, *dual) -> "PlaneP3":
        return cls(tuple(dual))

    def contains(self, p: ProjPoint) -> bool:
        return sum((a * b for a, b in zip(self.dual, p.coords)), 0) == 0

    def sort_key(self) -> tuple:
        return _key_order(self.dual)

    def __str__(self):
        return _key_str(self.dual)


def as_point(p) -> ProjPoint:
    return p if isinstance(p, ProjPoint) else ProjPoint(tuple(p))


def pluecker_raw(p: Sequence, q: Sequence) -> tuple:
    """Unnormalized Pluecker 2x2 minors of the pair (p, q)."""
    return tuple(p[i] * q[j] - p[j] * q[i] for i, j in PLUECKER_PAIRS)


def _pl(P: Sequence, i: int, j: int):
    if i < j:
        return P[_PIDX[(i, j)]]
    return -P[_PIDX[(j, i)]]


def _minors3(P: Sequence, r: Sequence) -> tuple:
    """The four 3x3 minors of [p; q; r] given the Pluecker vector P of (p, q)."""
    out = []
    for cols in ((1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2)):
        j, k, l = cols
        out.append(r[j] * _pl(P, k, l) - r[k] * _pl(P, j, l) + r[l] * _pl(P, j, k))
    return tuple(out)


def _plane_dual(P: Sequence, r: Sequence) -> tuple:
    m = _minors3(P, r)
    return (m[0], -m[1], m[2], -m[3])


def collinear(p, q, r) -> bool:
    """True iff the 3x4 coordinate matrix of p, q, r has rank <= 2."""
    P = pluecker_raw(tuple(p), tuple(q))
    return all(m == 0 for m in _minors3(P, tuple(r)))


def line_through(p, q) -> LineP3:
    P = pluecker_raw(tuple(p), tuple(q))
    if all(c == 0 for c in P):
        raise DegenerateError("line through coincident points")
    return LineP3(P)


def point_on_line(r, line: LineP3) -> bool:
    return all(m == 0 for m in _minors3(line.pluecker, tuple(r)))


def plane_span(p, q, r) -> PlaneP3:
    dual = _plane_dual(pluecker_raw(tuple(p), tuple(q)), tuple(r))
    if all(c == 0 for c in dual):
        raise DegenerateError("collinear points do not span a plane")
    return PlaneP3(dual)


def plane_through_line(line: LineP3, r) -> PlaneP3:
    dual = _plane_dual(line.pluecker, tuple(r))
    if all(c == 0 for c in dual):
        raise DegenerateError("point lies on the line")
    return PlaneP3(dual)


def coplanar4(p, q, r, s) -> bool:
    dual = _plane_dual(pluecker_raw(tuple(p), tuple(q)), tuple(r))
    return sum((a * b for a, b in zip(dual, tuple(s))), 0) == 0


def line_plane_meet(line_pts: tuple, plane: PlaneP3) -> ProjPoint:
    """Intersection of the line through two points with a plane not containing it."""
    p, q = (tuple(x) for x in line_pts)
    fp = sum((a * b for a, b in zip(plane.dual, p)), 0)
    fq = sum((a * b for a, b in zip(plane.dual, q)), 0)
    v = tuple(fq * a - fp * b for a, b in zip(p, q))
    if all(c == 0 for c in v):
        raise DegenerateError("line lies in the plane")
    return ProjPoint(v)


def combine(a, p, b, q) -> ProjPoint:
    """The point a*p + b*q."""
    return ProjPoint(tuple(simplify(a * x + b * y) for x, y in zip(p, q)))


def format_point(p) -> str:
    return _key_str(tuple(p))


def parse_point(text: str) -> ProjPoint:
    parts = [t for t in text.strip().split(":")]
    if len(parts) != 4:
        raise ValueError(f"expected 4 colon-separated coordinates, got {text!r}")
    return ProjPoint(tuple(parse_scalar(t) for t in parts))
