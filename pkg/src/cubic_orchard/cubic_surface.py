"""Cubic surfaces in P^3 given by a homogeneous cubic form.

Restriction of the form to a line uses polarization: for a cubic f,

    f(s*p + t*q) = f(p) s^3 + (grad f(p) . q) s^2 t + (grad f(q) . p) s t^2 + f(q) t^3.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from dataclasses import field as dc_field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from itertools import product
from pathlib import Path
from typing import Iterable, Sequence

from .errors import (
    ContainedLineError,
    DegenerateError,
    DegenerateSurfaceError,
    FixtureError,
    NotOnSurfaceError,
    PlaneInSurfaceError,
    ScanRefusedError,
    SingularPointError,
)
from .exactfield import (
    GaussRat,
    MPoly,
    UniPoly,
    format_scalar,
    nullspace,
    parse_scalar,
    poly_gcd,
    rank,
    rational_roots,
    simplify,
    squarefree_part,
)
from .projgeom import PlaneP3, ProjPoint, as_point

FIXTURE_ENV = "CUBIC_ORCHARD_FIXTURES"
MAX_SCAN_PRIME = 53

# The 20 cubic monomials in lexicographic order (descending powers of x first).
MONOMIALS = tuple(sorted((e for e in product(range(4), repeat=4) if sum(e) == 3), reverse=True))


@dataclass(frozen=True)
class Certificate:
    """How smoothness of the surface (or of its components) is known."""

    kind: str  # "asserted" or "sampled"
    detail: tuple = ()

    @classmethod
    def asserted(cls, name: str) -> "Certificate":
        return cls("asserted", (name,))

    @classmethod
    def sampled(cls, primes: Iterable[int] = ()) -> "Certificate":
        return cls("sampled", tuple(primes))


@dataclass(frozen=True)
class CubicSurface:
    form: MPoly
    name: str = ""
    field: str = "Q"
    certificate: Certificate = dc_field(default_factory=Certificate.sampled)

    def __post_init__(self):
        if self.form.nvars != 4 or not self.form.is_homogeneous(3) or self.form.is_zero():
            raise ValueError("a cubic surface needs a nonzero homogeneous cubic in 4 variables")

    @classmethod
    def from_coeffs(cls, coeffs: dict, **kw) -> "CubicSurface":
        return cls(MPoly.from_dict(4, coeffs), **kw)

    @property
    def grad_forms(self) -> tuple:
        return _gradient_forms(self.form)

    def __call__(self, p):
        return self.form.evaluate(tuple(p))

    def contains(self, p) -> bool:
        return self.form.evaluate(tuple(p)) == 0

    def __str__(self):
        return self.name or repr(self.form)


@lru_cache(maxsize=None)
def _gradient_forms(form: MPoly) -> tuple:
    return form.gradient()


@dataclass(frozen=True)
class RestrictedCubic:
    """Binary cubic c(s, t) = c0 s^3 + c1 s^2 t + c2 s t^2 + c3 t^3."""

    coeffs: tuple

    def __call__(self, s, t):
        c0, c1, c2, c3 = self.coeffs
        return c0 * s**3 + c1 * s * s * t + c2 * s * t * t + c3 * t**3

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)


def gradient(S: CubicSurface, p) -> tuple:
    p = tuple(p)
    return tuple(g.evaluate(p) for g in S.grad_forms)


def _dot(u, v):
    return sum((a * b for a, b in zip(u, v)), 0)


def restrict_to_line(S: CubicSurface, p, q) -> RestrictedCubic:
    p, q = as_point(p), as_point(q)
    if p == q:
        raise DegenerateError("restriction to a line needs two distinct points")
    pc, qc = p.coords, q.coords
    return RestrictedCubic((S(pc), _dot(gradient(S, pc), qc), _dot(gradient(S, qc), pc), S(qc)))


def line_in_surface(S: CubicSurface, p, q) -> bool:
    return restrict_to_line(S, p, q).is_zero()


def third_root_point(p: Sequence, q: Sequence, beta, gamma) -> ProjPoint:
    """Third root of s*t*(beta*s + gamma*t) on the line s*p + t*q, i.e. gamma*p - beta*q."""
    return ProjPoint(tuple(simplify(gamma * a - beta * b) for a, b in zip(p, q)))


def third_intersection(S: CubicSurface, p, q) -> ProjPoint:
    """Third point (with multiplicity) where the line pq meets S.

    Tangency at q yields q; tangency at p yields p.
    """
    p, q = as_point(p), as_point(q)
    c = restrict_to_line(S, p, q)
    if c.coeffs[0] != 0 or c.coeffs[3] != 0:
        raise NotOnSurfaceError("both points must lie on the surface")
    beta, gamma = c.coeffs[1], c.coeffs[2]
    if beta == 0 and gamma == 0:
        raise ContainedLineError(f"line {p} {q} lies in {S}")
    return third_root_point(p.coords, q.coords, beta, gamma)


def tangent_plane(S: CubicSurface, p) -> PlaneP3:
    g = gradient(S, p)
    if all(c == 0 for c in g):
        raise SingularPointError(f"{as_point(p)} is singular on {S}")
    return PlaneP3(g)


@dataclass(frozen=True)
class LinesThroughPoint:
    point: ProjPoint
    is_good: bool
    count_over_closure: int
    witnesses: tuple  # directions q with line(point, q) inside S, over the working field
    g2: UniPoly
    g3: UniPoly
    chart: tuple  # (v0, v1): pencil direction q(t) = v0 + t*v1, t = inf means v1


def tangent_pencil(S: CubicSurface, p) -> tuple:
    """Two directions v0, v1 so that {p, v0, v1} spans the tangent plane at p.

    Taken from the reduced-echelon nullspace basis of grad f(p); the first
    pair independent of p is used.
    """
    p = as_point(p)
    g = gradient(S, p.coords)
    if all(c == 0 for c in g):
        raise SingularPointError(f"{p} is singular on {S}")
    basis = nullspace([g], 4)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if rank([p.coords, basis[i], basis[j]]) == 3:
                return basis[i], basis[j]
    raise AssertionError("tangent plane basis does not extend the point")


def lines_through_point(S: CubicSurface, p) -> LinesThroughPoint:
    """Lines of S through p, detected over the algebraic closure by a gcd test."""
    p = as_point(p)
    if not S.contains(p):
        raise NotOnSurfaceError(f"{p} is not on {S}")
    v0, v1 = tangent_pencil(S, p)
    q = tuple(UniPoly((a, b)) for a, b in zip(v0, v1))
    grad_q = tuple(gf.evaluate(q) for gf in S.grad_forms)
    g2 = sum((gq * a for gq, a in zip(grad_q, p.coords)), UniPoly(()))
    g3 = S.form.evaluate(q)
    g3 = g3 if isinstance(g3, UniPoly) else UniPoly((g3,))
    if g2.is_zero() and g3.is_zero():
        raise DegenerateSurfaceError(f"every tangent line at {p} lies in {S}")
    g = poly_gcd(g2, g3)
    # common root at t = infinity: both top formal coefficients vanish
    at_inf = g2.degree < 2 and g3.degree < 3
    count = max(squarefree_part(g).degree, 0) + (1 if at_inf else 0)
    witnesses = []
    if g.degree >= 1:
        for r in rational_roots(g):
            witnesses.append(ProjPoint(tuple(simplify(a + r * b) for a, b in zip(v0, v1))))
    if at_inf:
        witnesses.append(ProjPoint(v1))
    return LinesThroughPoint(p, count == 0, count, tuple(witnesses), g2, g3, (v0, v1))


@lru_cache(maxsize=200_000)
def is_good(S: CubicSurface, p: ProjPoint) -> bool:
    return lines_through_point(S, p).is_good


# ---------------------------------------------------------------- plane sections


def plane_basis(plane: PlaneP3) -> tuple:
    return tuple(nullspace([plane.dual], 4))


def plane_section(S: CubicSurface, plane: PlaneP3):
    """Ternary cubic f(X*b0 + Y*b1 + W*b2) for the nullspace basis b of the plane."""
    from .cubic_curve import PlaneCubic

    basis = plane_basis(plane)
    X = [MPoly.var(i, 3) for i in range(3)]
    coords = [sum((X[k] * basis[k][i] for k in range(3)), MPoly(3, ())) for i in range(4)]
    tern = S.form.evaluate(coords)
    if not isinstance(tern, MPoly) or tern.is_zero():
        raise PlaneInSurfaceError(f"plane {plane} lies in {S}")
    return PlaneCubic(tern, plane, basis)


# ---------------------------------------------------------------- smoothness scan


def _mod_p(c, p: int) -> int:
    if isinstance(c, GaussRat):
        if c.im != 0:
            raise ValueError("mod-p scan needs rational coefficients")
        c = c.re
    c = Fraction(c)
    if c.denominator % p == 0:
        raise ValueError(f"coefficient {c} not integral at {p}")
    return (c.numerator * pow(c.denominator, -1, p)) % p


def _projective_points_mod(p: int):
    for lead in range(4):
        for rest in product(range(p), repeat=3 - lead):
            yield (0,) * lead + (1,) + rest


@dataclass(frozen=True)
class SmoothScan:
    prime: int
    singular_points: tuple

    @property
    def smooth(self) -> bool:
        return not self.singular_points


def check_smooth_mod_primes(S: CubicSurface, primes: Sequence[int],
                            bound: int = MAX_SCAN_PRIME, force: bool = False) -> list[SmoothScan]:
    """Brute-force search of P^3(F_p) for common zeros of f and grad f.

    A clean scan is evidence, not proof, of smoothness in characteristic 0.
    Surfaces with an asserted certificate are skipped unless ``force`` is set.
    """
    if S.certificate.kind == "asserted" and not force:
        return []
    out = []
    for p in primes:
        if p > bound:
            raise ScanRefusedError(f"prime {p} exceeds the desk-scan bound {bound}")
        forms = [S.form] + list(S.grad_forms)
        reduced = [[(e, _mod_p(c, p)) for e, c in f.terms] for f in forms]
        sing = []
        for pt in _projective_points_mod(p):
            ok = True
            for terms in reduced:
                v = 0
                for e, c in terms:
                    v += c * pt[0] ** e[0] * pt[1] ** e[1] * pt[2] ** e[2] * pt[3] ** e[3]
                if v % p:
                    ok = False
                    break
            if ok:
                sing.append(pt)
        out.append(SmoothScan(p, tuple(sing)))
    return out


# ---------------------------------------------------------------- point sources


def rational_points_in_box(S: CubicSurface, bound: int, chart: int = 3) -> list[ProjPoint]:
    """Points of S with integer affine coordinates |x_i| <= bound in the chart x_chart = 1."""
    found = set()
    rng = range(-bound, bound + 1)
    for a, b, c in product(rng, rng, rng):
        v = [a, b, c]
        v.insert(chart, 1)
        if S.form.evaluate(v) == 0:
            found.add(ProjPoint(tuple(v)))
    return sorted(found, key=ProjPoint.sort_key)


# ---------------------------------------------------------------- fixtures


def format_fixture(S: CubicSurface) -> str:
    lines = [f"# cubic surface {S.name}".rstrip(), f"field: {S.field}"]
    if S.certificate.kind == "asserted":
        lines.append("certificate: asserted")
    for e, c in sorted(S.form.terms, reverse=True):
        lines.append(f"{e[0]} {e[1]} {e[2]} {e[3]} : {format_scalar(c)}")
    return "\n".join(lines) + "\n"


def parse_fixture(text: str, name: str = "") -> CubicSurface:
    field_tag = None
    asserted = False
    coeffs: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        low = line.lower()
        if low.startswith("field:"):
            field_tag = line.split(":", 1)[1].strip()
            if field_tag not in ("Q", "Q(i)"):
                raise FixtureError(f"line {lineno}: unknown field {field_tag!r}")
            continue
        if low.startswith("certificate:"):
            asserted = line.split(":", 1)[1].strip().lower() == "asserted"
            continue
        try:
            lhs, rhs = line.split(":", 1)
            exps = tuple(int(x) for x in lhs.split())
            coef = parse_scalar(rhs)
        except ValueError as exc:
            raise FixtureError(f"line {lineno}: cannot parse {raw!r}") from exc
        if len(exps) != 4 or sum(exps) != 3 or min(exps) < 0:
            raise FixtureError(f"line {lineno}: exponents must be 4 nonnegative ints summing to 3")
        if isinstance(coef, GaussRat) and coef.im != 0 and field_tag != "Q(i)":
            raise FixtureError(f"line {lineno}: Gaussian coefficient in a Q fixture")
        coeffs[exps] = coeffs.get(exps, 0) + coef
    if field_tag is None:
        raise FixtureError("missing 'field:' header")
    cert = Certificate.asserted(name) if asserted else Certificate.sampled()
    try:
        return CubicSurface.from_coeffs(coeffs, name=name, field=field_tag, certificate=cert)
    except ValueError as exc:
        raise FixtureError(str(exc)) from exc


BUILTIN_FIXTURES = ("F1", "F2", "F3", "F4", "F5")


def fixture_dir() -> Path:
    override = os.environ.get(FIXTURE_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("cubic_orchard") / "fixtures"))


def load_surface(selector: str) -> CubicSurface:
    """Load a surface by fixture name (F1..F5) or by path to a fixture file."""
    path = Path(selector)
    if path.suffix or path.exists():
        if not path.exists():
            raise FixtureError(f"fixture file {selector} not found")
        return parse_fixture(path.read_text(), name=path.stem)
    candidate = fixture_dir() / f"{selector}.cubic"
    if not candidate.exists():
        raise FixtureError(f"fixture {selector!r} not found in {fixture_dir()}")
    return parse_fixture(candidate.read_text(), name=selector)


def cusp_section_point(t) -> ProjPoint:
    """P(t) = (t : 1 : 0 : t^3) on the z = 0 section of F1."""
    return ProjPoint((t, 1, 0, t**3))
