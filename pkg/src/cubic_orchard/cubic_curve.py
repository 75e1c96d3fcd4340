"""Plane cubic curves: multiplicities, singular points and the chord-tangent group law."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import ContainedLineError, DegenerateError, NotOnCurveError, SingularPointError
from .exactfield import (
    MPoly,
    UniPoly,
    det,
    nullspace,
    poly_gcd,
    rank,
    rational_roots,
    simplify,
    solve,
    squarefree_part,
    to_field,
)
from .projgeom import PlaneP3, ProjPoint, canonical_vector


@dataclass(frozen=True)
class CurvePoint:
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != 3:
            raise ValueError("plane points have 3 homogeneous coordinates")
        object.__setattr__(self, "coords", canonical_vector(self.coords))

    @classmethod
    def of(cls, *coords) -> "CurvePoint":
        return cls(tuple(coords))

    def __iter__(self):
        return iter(self.coords)

    def __str__(self):
        return ":".join(str(c) for c in self.coords)


@dataclass(frozen=True)
class PlaneCubic:
    form: MPoly
    plane: PlaneP3 | None = None
    basis: tuple | None = None

    def __post_init__(self):
        if self.form.nvars != 3 or not self.form.is_homogeneous(3) or self.form.is_zero():
            raise ValueError("a plane cubic needs a nonzero homogeneous cubic in 3 variables")

    @property
    def degree(self) -> int:
        return 3

    def contains(self, p) -> bool:
        return self.form.evaluate(tuple(p)) == 0

    def embed(self, p) -> ProjPoint:
        """Plane-internal coordinates back to P^3."""
        if self.basis is None:
            raise ValueError("curve has no embedding")
        c = tuple(p)
        return ProjPoint(tuple(simplify(sum((c[k] * self.basis[k][i] for k in range(3)), 0))
                               for i in range(4)))

    def project(self, p) -> CurvePoint:
        """Coordinates of a point of the plane with respect to the section basis."""
        if self.basis is None:
            raise ValueError("curve has no embedding")
        sol = solve(self.basis, tuple(p))
        if sol is None:
            raise DegenerateError(f"{p} is not on the plane {self.plane}")
        return CurvePoint(sol)

    def gradient(self, p) -> tuple:
        p = tuple(p)
        return tuple(g.evaluate(p) for g in self.form.gradient())


def cusp_curve() -> PlaneCubic:
    """y^2 w - x^3 in coordinates (x, y, w)."""
    return PlaneCubic(MPoly.from_dict(3, {(0, 2, 1): 1, (3, 0, 0): -1}))


def cusp_point(t) -> CurvePoint:
    return CurvePoint((t, 1, t**3))


def _as_curve_point(p) -> CurvePoint:
    return p if isinstance(p, CurvePoint) else CurvePoint(tuple(p))


def local_expansion(C: PlaneCubic, p) -> MPoly:
    """C in the affine chart where p is finite, translated so p sits at the origin.

    The chart divides by the first nonzero coordinate of p; the result is a
    polynomial in the two remaining coordinates.
    """
    p = _as_curve_point(p)
    k = next(i for i, c in enumerate(p.coords) if c != 0)
    lead = p.coords[k]
    others = [i for i in range(3) if i != k]
    U = [MPoly.var(0, 2), MPoly.var(1, 2)]
    subs = [None, None, None]
    subs[k] = MPoly.const(1, 2)
    for u, i in zip(U, others):
        subs[i] = u + simplify(to_field(p.coords[i]) / lead)
    loc = C.form.evaluate(subs)
    return loc if isinstance(loc, MPoly) else MPoly.const(loc, 2)


def multiplicity(C: PlaneCubic, p) -> int:
    """Lowest total degree of C expanded around p."""
    if not C.contains(p):
        raise NotOnCurveError(f"{p} is not on the curve")
    loc = local_expansion(C, p)
    return loc.lowest_degree()


def _binary_restriction(C: PlaneCubic, x: Sequence, y: Sequence) -> tuple:
    gx, gy = C.gradient(x), C.gradient(y)
    return (C.form.evaluate(tuple(x)), sum((a * b for a, b in zip(gx, y)), 0),
            sum((a * b for a, b in zip(gy, x)), 0), C.form.evaluate(tuple(y)))


def _require_smooth(C: PlaneCubic, p: CurvePoint):
    if not C.contains(p):
        raise NotOnCurveError(f"{p} is not on the curve")
    if all(g == 0 for g in C.gradient(p.coords)):
        raise SingularPointError(f"{p} is singular on the curve")


def tangent_direction(C: PlaneCubic, x) -> tuple:
    """A second point on the tangent line at a smooth point x."""
    x = _as_curve_point(x)
    g = C.gradient(x.coords)
    for v in nullspace([g], 3):
        if rank([x.coords, v]) == 2:
            return v
    raise AssertionError("tangent line basis does not extend the point")


def chord_op(C: PlaneCubic, x, y) -> CurvePoint:
    """x o y: third point of the line xy on C (tangent line when x == y)."""
    x, y = _as_curve_point(x), _as_curve_point(y)
    _require_smooth(C, x)
    _require_smooth(C, y)
    if x == y:
        v = tangent_direction(C, x)
        _, c1, c2, c3 = _binary_restriction(C, x.coords, v)
        assert c1 == 0
        # restriction is t^2 (c2 s + c3 t): third root (s:t) = (c3 : -c2)
        if c2 == 0 and c3 == 0:
            raise ContainedLineError("tangent line lies in the curve")
        return CurvePoint(tuple(simplify(c3 * a - c2 * b) for a, b in zip(x.coords, v)))
    _, beta, gamma, _ = _binary_restriction(C, x.coords, y.coords)
    if beta == 0 and gamma == 0:
        raise ContainedLineError("chord lies in the curve")
    return CurvePoint(tuple(simplify(gamma * a - beta * b) for a, b in zip(x.coords, y.coords)))


def group_add(C: PlaneCubic, u, x, y) -> CurvePoint:
    """x + y := u o (x o y), with identity u."""
    return chord_op(C, u, chord_op(C, x, y))


def group_neg(C: PlaneCubic, u, x) -> CurvePoint:
    """The z with x + z = u, namely x o (u o u)."""
    return chord_op(C, x, chord_op(C, u, u))


def check_circ_identity(C: PlaneCubic, u, x, y) -> bool:
    """x o y == (u o u) - x - y in the group with identity u."""
    lhs = chord_op(C, x, y)
    rhs = group_add(C, u, group_add(C, u, chord_op(C, u, u), group_neg(C, u, x)), group_neg(C, u, y))
    return lhs == rhs


# ---------------------------------------------------------------- singular points


@dataclass(frozen=True)
class SingularSearch:
    points: tuple
    complete: bool  # False when some candidates may be irrational or elimination degenerated


def _poly_in(poly: MPoly, var: int, other: int) -> list[UniPoly]:
    """Coefficients (in x_other) of poly viewed as a polynomial in x_var, 2-variable case."""
    return [c.to_unipoly(other) for c in poly.coefficients_in(var)]


def _resultant(f: list, g: list):
    """Sylvester resultant of two polynomials given by coefficient lists (low to high)."""
    m, n = len(f) - 1, len(g) - 1
    if m < 0 or n < 0:
        return UniPoly(())
    if m == 0:
        return f[0] ** n if n else UniPoly((1,))
    if n == 0:
        return g[0] ** m
    size = m + n
    zero = UniPoly(())
    rows = []
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(f)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(g)):
            row[i + j] = c
        rows.append(row)
    r = det(rows)
    return r if isinstance(r, UniPoly) else UniPoly((r,))


def _common_roots(polys: list[UniPoly]) -> tuple[list, bool]:
    nonzero = [p for p in polys if not p.is_zero()]
    if not nonzero:
        return [], False
    g = nonzero[0]
    for p in nonzero[1:]:
        g = poly_gcd(g, p)
    if g.degree <= 0:
        return [], True
    g = squarefree_part(g)
    roots = rational_roots(g)
    return roots, len(roots) == g.degree


def singular_points_rational(C: PlaneCubic) -> SingularSearch:
    """Field-rational singular points via chart-wise resultant elimination.

    Chart w != 0 eliminates y between pairs of partials; the line w = 0 is
    handled by the charts (x : 1 : 0) and (1 : 0 : 0).
    """
    grads = C.form.gradient()
    found = set()
    complete = True
    # chart w = 1, variables (x, y)
    one = MPoly.const(1, 2)
    X, Y = MPoly.var(0, 2), MPoly.var(1, 2)
    aff = [g.evaluate([X, Y, one]) for g in grads]
    aff = [a if isinstance(a, MPoly) else MPoly.const(a, 2) for a in aff]
    res = []
    for a, b in combinations(aff, 2):
        res.append(_resultant(_poly_in(a, 1, 0), _poly_in(b, 1, 0)))
    xs, ok = _common_roots(res)
    if all(r.is_zero() for r in res):
        ok = False
    complete &= ok
    for x0 in xs:
        fibre = [a.evaluate([x0, UniPoly((0, 1))]) for a in aff]
        fibre = [f if isinstance(f, UniPoly) else UniPoly((f,)) for f in fibre]
        ys, ok = _common_roots(fibre)
        complete &= ok
        for y0 in ys:
            found.add(CurvePoint((x0, y0, 1)))
    # w = 0, y = 1
    t = UniPoly((0, 1))
    line = [g.evaluate([t, 1, 0]) for g in grads]
    line = [f if isinstance(f, UniPoly) else UniPoly((f,)) for f in line]
    xs, ok = _common_roots(line)
    complete &= ok
    for x0 in xs:
        found.add(CurvePoint((x0, 1, 0)))
    if all(g.evaluate([1, 0, 0]) == 0 for g in grads):
        found.add(CurvePoint((1, 0, 0)))
    pts = tuple(sorted(found, key=lambda p: tuple(str(c) for c in p.coords)))
    return SingularSearch(pts, complete)


def mult_triple_bound_check(C: PlaneCubic, a1, a2, a3=None) -> bool:
    """Two-point multiplicity bound for plane cubics: mu_a + mu_b <= 3 for every pair."""
    pts = [_as_curve_point(p) for p in (a1, a2, a3) if p is not None]
    if len(set(pts)) != len(pts):
        raise DegenerateError("points must be distinct")
    mults = [multiplicity(C, p) for p in pts]
    return all(m1 + m2 <= C.degree for m1, m2 in combinations(mults, 2))
