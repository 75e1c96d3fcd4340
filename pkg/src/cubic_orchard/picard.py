"""Divisor classes on a cubic surface and on its blow-up at one point.

Pic(S) is spanned by l, e1..e6 and Pic of the blow-up adds e0.  The
intersection form is diag(1, -1, ..., -1) in these bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable

from .errors import ExcludedCurveError


@dataclass(frozen=True)
class DivClass:
    """a*l - sum b_i e_i with i = 1..6."""

    a: int
    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))
        if len(self.b) != 6:
            raise ValueError("a class on S has 6 exceptional coefficients")

    @classmethod
    def hyperplane(cls) -> "DivClass":
        return cls(3, (1,) * 6)

    def blow(self, b0: int = 0) -> "DivClassBlow":
        return DivClassBlow(self.a, (b0,) + self.b)

    def __str__(self):
        return f"{self.a};{','.join(map(str, self.b))}"


@dataclass(frozen=True)
class DivClassBlow:
    """a*l - sum b_j e_j with j = 0..6; e0 is the exceptional curve over the centre."""

    a: int
    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))
        if len(self.b) != 7:
            raise ValueError("a class on the blow-up has 7 exceptional coefficients")

    @classmethod
    def basis(cls) -> list["DivClassBlow"]:
        """l, e0, ..., e6 as classes (e_j has b_j = -1)."""
        out = [cls(1, (0,) * 7)]
        for j in range(7):
            out.append(cls(0, tuple(-1 if k == j else 0 for k in range(7))))
        return out

    def __add__(self, other: "DivClassBlow") -> "DivClassBlow":
        return DivClassBlow(self.a + other.a, tuple(x + y for x, y in zip(self.b, other.b)))

    def __sub__(self, other: "DivClassBlow") -> "DivClassBlow":
        return DivClassBlow(self.a - other.a, tuple(x - y for x, y in zip(self.b, other.b)))

    def __rmul__(self, k: int) -> "DivClassBlow":
        return DivClassBlow(k * self.a, tuple(k * x for x in self.b))

    def __str__(self):
        return f"{self.a};{','.join(map(str, self.b))}"


@dataclass(frozen=True)
class CurveClassWithMult:
    cls: DivClass
    m: int

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("multiplicity must be nonnegative")


def pairing(D, E) -> int:
    """Intersection number; accepts DivClass or DivClassBlow (mixed inputs are lifted)."""
    if isinstance(D, DivClass):
        D = D.blow()
    if isinstance(E, DivClass):
        E = E.blow()
    return D.a * E.a - sum(x * y for x, y in zip(D.b, E.b))


def degree(D: DivClass | DivClassBlow) -> int:
    """Degree against the hyperplane class; e0 does not contribute."""
    b = D.b if isinstance(D, DivClass) else D.b[1:]
    return 3 * D.a - sum(b)


def geiser_pic(D: DivClassBlow) -> DivClassBlow:
    """Pullback by the lifted Geiser involution.

    l -> 8l - 3 sum e_j and e_i -> 3l - sum e_j - e_i, extended linearly.
    Writing D = a l - sum b_i e_i gives the formulas below.
    """
    s = sum(D.b)
    a = 8 * D.a - 3 * s
    b = tuple(3 * D.a - s - bi for bi in D.b)
    return DivClassBlow(a, b)


def pushforward_curve_class(C: CurveClassWithMult) -> CurveClassWithMult:
    """Class and centre multiplicity of the image of a curve under the Geiser involution."""
    a, b, m = C.cls.a, C.cls.b, C.m
    s = sum(b)
    new_a = 8 * a - 3 * s - 3 * m
    new_b = tuple(3 * a - s - bi - m for bi in b)
    new_m = 3 * a - s - 2 * m
    out = DivClass(new_a, new_b)
    if degree(out) <= 0:
        raise ExcludedCurveError(
            f"class {C.cls} with multiplicity {m} is contracted (image degree {degree(out)})")
    if new_m < 0:
        raise ExcludedCurveError(f"class {C.cls} with multiplicity {m} is not a curve class")
    return CurveClassWithMult(out, new_m)


def deg_mult_step(d: int, m: int) -> tuple[int, int]:
    return 2 * d - 3 * m, d - 2 * m


@dataclass(frozen=True)
class GenusCheck:
    feasible: bool
    lhs: Fraction
    rhs: Fraction

    @property
    def slack(self) -> Fraction:
        return self.rhs - self.lhs


def arithmetic_genus(cls: DivClass) -> Fraction:
    return Fraction((cls.a - 1) * (cls.a - 2), 2) - sum(Fraction(b * (b - 1), 2) for b in cls.b)


def genus_feasible(cls: DivClass, mults: Iterable[int]) -> GenusCheck:
    """sum r(r-1)/2 over the given point multiplicities against the arithmetic genus."""
    lhs = sum((Fraction(r * (r - 1), 2) for r in mults), Fraction(0))
    rhs = arithmetic_genus(cls)
    return GenusCheck(lhs <= rhs, lhs, rhs)


# ---------------------------------------------------------------- degree-3 endgame


@dataclass(frozen=True)
class Degree3Case:
    cls: DivClass
    paired: DivClass
    planar: bool


def _paired(cls: DivClass) -> DivClass:
    return DivClass(6 - cls.a, tuple(2 - b for b in cls.b))


def _orbit_key(cls: DivClass) -> tuple:
    return (cls.a, tuple(sorted(cls.b, reverse=True)))


def enumerate_degree3_raw() -> list[DivClass]:
    """Sorted classes with 3a - sum b = 3, 1 <= a <= 3 and 0 <= b_i <= max(a-1, 1)."""
    out = []
    for a in (1, 2, 3):
        top = max(a - 1, 1)
        for combo in combinations_with_replacement(range(top, -1, -1), 6):
            if 3 * a - sum(combo) == 3:
                out.append(DivClass(a, combo))
    return out


def enumerate_degree3_classes() -> list[Degree3Case]:
    """Orbit cases of degree-3 curve classes together with their Geiser-paired class.

    Raw bound enumeration also admits classes of negative arithmetic genus,
    which no irreducible curve has; those are dropped.
    """
    cases = []
    seen = set()
    for cls in enumerate_degree3_raw():
        key = _orbit_key(cls)
        if key in seen:
            continue
        seen.add(key)
        pair = _paired(cls)
        if not (genus_feasible(cls, []).feasible and genus_feasible(pair, []).feasible):
            continue
        cases.append(Degree3Case(cls, pair, cls == DivClass.hyperplane()))
    cases.sort(key=lambda c: (c.planar, c.cls.a, tuple(-x for x in c.cls.b)))
    return cases


@dataclass(frozen=True)
class EndgamePairings:
    cls: DivClass
    paired: DivClass
    self_pairing: int
    paired_self_pairing: int
    cross_pairing: int


def pairing_checks_for_endgame() -> list[EndgamePairings]:
    """Intersection numbers for the non-planar degree-3 cases."""
    out = []
    for case in enumerate_degree3_classes():
        if case.planar:
            continue
        out.append(EndgamePairings(case.cls, case.paired, pairing(case.cls, case.cls),
                                   pairing(case.paired, case.paired),
                                   pairing(case.cls, case.paired)))
    return out


@dataclass(frozen=True)
class MultReplay:
    d0: int
    m: int
    n_points: int
    lhs: Fraction
    best_rhs: Fraction
    best_class: DivClass | None

    @property
    def feasible(self) -> bool:
        return self.best_class is not None and self.lhs <= self.best_rhs


def replay_equal_multiplicity(d0: int, m: int, n_points: int = 5,
                              max_a: int | None = None) -> MultReplay:
    """Best genus slack over all classes of degree d0 carrying n_points points of multiplicity m.

    Searches a in [1, max_a] and b_i in [0, a] (sorted); returns the class
    maximizing the genus bound.
    """
    if max_a is None:
        max_a = 2 * d0 + 2
    lhs = Fraction(n_points * m * (m - 1), 2)
    best, best_cls = None, None
    for a in range(1, max_a + 1):
        total = 3 * a - d0
        if total < 0:
            continue
        for combo in combinations_with_replacement(range(a, -1, -1), 6):
            if sum(combo) != total:
                continue
            cls = DivClass(a, combo)
            rhs = arithmetic_genus(cls)
            if best is None or rhs > best:
                best, best_cls = rhs, cls
    return MultReplay(d0, m, n_points, lhs, best if best is not None else Fraction(-1), best_cls)
