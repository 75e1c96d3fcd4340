"""Reflections of the quadric sum x_i^2 = 0 over Q(i).

All dot products are the bilinear form sum u_i v_i (no conjugation).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import DegenerateError, IsotropicCenterError
from .exactfield import I, dot, identity, matmul, nullspace, rank, simplify, to_field, transpose
from .projgeom import ProjPoint, as_point, collinear

Matrix = tuple  # 4x4 tuple of tuples


def is_on_quadric(p) -> bool:
    v = tuple(p)
    return dot(v, v) == 0


def reflection(x) -> Matrix:
    """Matrix of v -> v - 2 (x.v)/(x.x) x."""
    x = tuple(as_point(x).coords)
    n = dot(x, x)
    if n == 0:
        raise IsotropicCenterError(f"{ProjPoint(x)} lies on the quadric")
    n = to_field(n)
    return tuple(tuple(simplify((1 if i == j else 0) - 2 * x[i] * x[j] / n) for j in range(4))
                 for i in range(4))


def apply(M: Matrix, v) -> tuple:
    v = tuple(v)
    return tuple(simplify(sum((M[i][j] * v[j] for j in range(4)), 0)) for i in range(4))


def is_orthogonal(M: Matrix) -> bool:
    return matmul(transpose(M), M) == identity(4)


def proportional(A: Matrix, B: Matrix) -> bool:
    """A = lambda * B for some nonzero scalar lambda (entrywise cross-products vanish)."""
    a = [x for row in A for x in row]
    b = [x for row in B for x in row]
    if all(x == 0 for x in a) or all(x == 0 for x in b):
        return all(x == 0 for x in a) and all(x == 0 for x in b)
    k = next(i for i, x in enumerate(b) if x != 0)
    return all(a[i] * b[k] - a[k] * b[i] == 0 for i in range(16))


def same_subspace(U: list, V: list) -> bool:
    if not U or not V:
        return not U and not V
    r = rank(U)
    return r == rank(V) and rank(list(U) + list(V)) == r


@dataclass(frozen=True)
class FixedSpace:
    eigenspace: tuple
    perp_of_span: tuple
    matches: bool
    degenerate: bool  # a lies in b-perp


def fixed_space_of_product(a, b) -> FixedSpace:
    """Eigenvalue-1 space of R_a R_b compared with the orthogonal complement of span(a, b)."""
    a, b = as_point(a), as_point(b)
    if a == b:
        raise DegenerateError("centres must be distinct")
    P = matmul(reflection(a), reflection(b))
    shifted = [[simplify(P[i][j] - (1 if i == j else 0)) for j in range(4)] for i in range(4)]
    E1 = nullspace(shifted, 4)
    perp = nullspace([a.coords, b.coords], 4)
    return FixedSpace(tuple(E1), tuple(perp), same_subspace(E1, perp),
                      dot(a.coords, b.coords) == 0)


def segre_point(s, t, p, q) -> ProjPoint:
    """Image of ((s:t), (p:q)) on the quadric through the split coordinates
    u0 = x0 + i x1, u1 = x0 - i x1, u2 = x2 + i x3, u3 = x2 - i x3."""
    if (s == 0 and t == 0) or (p == 0 and q == 0):
        raise DegenerateError("degenerate P^1 parameter")
    u0, u1, u2, u3 = s * p, t * q, s * q, -t * p
    half = to_field(1) / 2
    return ProjPoint((
        simplify((u0 + u1) * half),
        simplify((u0 - u1) * half / I),
        simplify((u2 + u3) * half),
        simplify((u2 - u3) * half / I),
    ))


@dataclass(frozen=True)
class CommutationReport:
    commutes: bool
    c_on_line: bool
    c_on_perp: bool
    hypothesis_ok: bool

    @property
    def consistent(self) -> bool:
        """commutes implies c on the line or on its orthogonal complement."""
        return (not self.commutes) or self.c_on_line or self.c_on_perp

    def to_dict(self) -> dict:
        return {"commutes": self.commutes, "c_on_line": self.c_on_line,
                "c_on_perp": self.c_on_perp, "hypothesis_ok": self.hypothesis_ok,
                "consistent": self.consistent}


def commutation_experiment(a, b, c) -> CommutationReport:
    """Does R_c R_a commute projectively with R_b R_c?"""
    a, b, c = as_point(a), as_point(b), as_point(c)
    Ra, Rb, Rc = reflection(a), reflection(b), reflection(c)
    P1 = matmul(Rc, Ra)
    P2 = matmul(Rb, Rc)
    commutes = proportional(matmul(P1, P2), matmul(P2, P1))
    hyp = a != b and dot(a.coords, b.coords) != 0
    on_line = collinear(a, b, c)
    on_perp = dot(c.coords, a.coords) == 0 and dot(c.coords, b.coords) == 0
    return CommutationReport(commutes, on_line, on_perp, hyp)


# ---------------------------------------------------------------- sampling


def random_gauss(rng: random.Random, bound: int = 5):
    return simplify(rng.randint(-bound, bound) + rng.randint(-bound, bound) * I)


def random_non_isotropic(rng: random.Random, bound: int = 5) -> ProjPoint:
    while True:
        v = tuple(random_gauss(rng, bound) for _ in range(4))
        if any(c != 0 for c in v) and dot(v, v) != 0:
            return ProjPoint(v)


def random_centre_pair(rng: random.Random, bound: int = 5) -> tuple[ProjPoint, ProjPoint]:
    """Non-isotropic a != b with a.b != 0."""
    while True:
        a = random_non_isotropic(rng, bound)
        b = random_non_isotropic(rng, bound)
        if a != b and dot(a.coords, b.coords) != 0:
            return a, b


def random_quadric_point(rng: random.Random, bound: int = 5) -> ProjPoint:
    while True:
        s, t, p, q = (rng.randint(-bound, bound) for _ in range(4))
        if (s or t) and (p or q):
            return segre_point(s, t, p, q)


def point_on_line_of(a: ProjPoint, b: ProjPoint, rng: random.Random, bound: int = 5) -> ProjPoint:
    """A random non-isotropic point of the line ab other than a, b."""
    while True:
        s = random_gauss(rng, bound)
        t = random_gauss(rng, bound)
        v = tuple(simplify(s * x + t * y) for x, y in zip(a.coords, b.coords))
        if all(c == 0 for c in v) or dot(v, v) == 0:
            continue
        p = ProjPoint(v)
        if p not in (a, b):
            return p


def commutation_sweep(samples: int, seed: int) -> list[tuple[tuple, CommutationReport]]:
    """Mixed sweep: a third of the centres c on the line ab, a third on its
    orthogonal complement (when non-isotropic), the rest random."""
    rng = random.Random(seed)
    out = []
    for k in range(samples):
        a, b = random_centre_pair(rng)
        kind = k % 3
        c = None
        if kind == 0:
            c = point_on_line_of(a, b, rng)
        elif kind == 1:
            perp = nullspace([a.coords, b.coords], 4)
            for _ in range(20):
                s, t = random_gauss(rng), random_gauss(rng)
                v = tuple(simplify(s * x + t * y) for x, y in zip(perp[0], perp[1]))
                if any(x != 0 for x in v) and dot(v, v) != 0:
                    c = ProjPoint(v)
                    break
        if c is None:
            c = random_non_isotropic(rng)
        out.append(((a, b, c), commutation_experiment(a, b, c)))
    return out
