"""Exact scalars over Q and Q(i), polynomials, and small exact linear algebra.

Rationals are plain :class:`fractions.Fraction` (or ``int``); Gaussian rationals
are :class:`GaussRat`.  Everything here is immutable and exact.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Sequence, Union

from .errors import DegenerateError, NotARootError, UndefinedGcdError

Rat = Fraction
Scalar = Union[int, Fraction, "GaussRat"]


class GaussRat:
    """Element re + im*i of Q(i) with Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: int | Fraction = 0, im: int | Fraction = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussRat is immutable")

    @staticmethod
    def _lift(other) -> "GaussRat | None":
        if isinstance(other, GaussRat):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussRat(other, 0)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussRat(self.re * other, self.im * other)
        if isinstance(other, GaussRat):
            return GaussRat(self.re * other.re - self.im * other.im,
                            self.re * other.im + self.im * other.re)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussRat":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("GaussRat division by zero")
        return GaussRat(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = GaussRat(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        return f"GaussRat({self.re}, {self.im})"

    def __str__(self):
        return format_scalar(self)


I = GaussRat(0, 1)


def is_gauss(x) -> bool:
    return isinstance(x, GaussRat) and x.im != 0


def any_gauss(values: Iterable) -> bool:
    return any(is_gauss(v) for v in values)


def to_field(x) -> Scalar:
    """Coerce an int/Fraction/GaussRat into a divisible field element."""
    if isinstance(x, GaussRat):
        return x
    return Fraction(x)


def simplify(x) -> Scalar:
    """Drop to the smallest representation: int, then Fraction, then GaussRat."""
    if isinstance(x, GaussRat):
        if x.im != 0:
            return x
        x = x.re
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def conj(x) -> Scalar:
    return x.conjugate() if isinstance(x, GaussRat) else x


# ---------------------------------------------------------------- text i/o

_GAUSS_RE = re.compile(r"^([+-]?[0-9]+(?:/[0-9]+)?)([+-][0-9]*(?:/[0-9]+)?)i$")


def format_scalar(x) -> str:
    if isinstance(x, GaussRat):
        re_s = str(simplify(x.re))
        im = simplify(x.im)
        sign = "-" if im < 0 else "+"
        return f"{re_s}{sign}{abs(im)}i"
    return str(simplify(x))


def parse_scalar(text: str) -> Scalar:
    text = text.strip().replace(" ", "")
    if text.endswith("i"):
        m = _GAUSS_RE.match(text)
        if m:
            im_txt = m.group(2)
            if im_txt in ("+", "-"):
                im_txt += "1"
            return GaussRat(Fraction(m.group(1)), Fraction(im_txt))
        body = text[:-1]
        if body in ("", "+", "-"):
            body += "1"
        return GaussRat(0, Fraction(body))
    return simplify(Fraction(text))


# ---------------------------------------------------------------- univariate


@dataclass(frozen=True)
class UniPoly:
    """Univariate polynomial, coefficients listed from the constant term up."""

    coeffs: tuple = ()

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def of(cls, *coeffs) -> "UniPoly":
        return cls(tuple(coeffs))

    @classmethod
    def from_roots(cls, roots: Iterable) -> "UniPoly":
        p = cls((1,))
        for r in roots:
            p = p * cls((-r, 1))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self):
        return self.coeffs[-1]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def _coerce(self, other) -> "UniPoly":
        return other if isinstance(other, UniPoly) else UniPoly((other,))

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = o.coeffs + (0,) * (n - len(o.coeffs))
        return UniPoly(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return UniPoly(tuple(c * other for c in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return UniPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = UniPoly((1,))
        for _ in range(n):
            out = out * self
        return out

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = [to_field(c) for c in self.coeffs]
        lead = to_field(other.lead())
        dq = other.degree
        quot = [0] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1 - dq, -1, -1):
            coef = rem[k + dq] / lead
            quot[k] = coef
            if coef != 0:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= coef * b
        rem = rem[:dq] if dq > 0 else []
        return (UniPoly(tuple(simplify(c) for c in quot)),
                UniPoly(tuple(simplify(c) for c in rem)))

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        lead = to_field(self.lead())
        return UniPoly(tuple(simplify(to_field(c) / lead) for c in self.coeffs))

    def derivative(self) -> "UniPoly":
        return UniPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def __repr__(self):
        return f"UniPoly({', '.join(format_scalar(c) for c in self.coeffs)})"


def poly_gcd(p: UniPoly, q: UniPoly) -> UniPoly:
    """Monic gcd by the Euclidean remainder sequence."""
    if p.is_zero() and q.is_zero():
        raise UndefinedGcdError("gcd(0, 0) is undefined")
    a, b = p, q
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


def poly_divide_out_root(p: UniPoly, r) -> UniPoly:
    """Return q with p = (t - r) * q."""
    if p(r) != 0:
        raise NotARootError(f"{format_scalar(r)} is not a root")
    q, rem = p.divmod(UniPoly((-r, 1)))
    assert rem.is_zero()
    return q


def squarefree_part(p: UniPoly) -> UniPoly:
    if p.degree <= 0:
        return p.monic()
    g = poly_gcd(p, p.derivative())
    return p.divmod(g)[0].monic()


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = set()
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            out.add(d)
            out.add(n // d)
    return sorted(out)


def rational_roots(p: UniPoly) -> list:
    """Distinct roots of p lying in the coefficient field.

    Rational root theorem over Q; over Q(i) only linear factors of the
    squarefree part are resolved.
    """
    if p.is_zero():
        raise DegenerateError("zero polynomial has every root")
    if any_gauss(p.coeffs):
        sf = squarefree_part(p)
        return [simplify(-to_field(sf.coeffs[0]))] if sf.degree == 1 else []
    coeffs = [Fraction(c.re if isinstance(c, GaussRat) else c) for c in p.coeffs]
    roots = []
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        if 0 not in roots:
            roots.append(0)
    if len(coeffs) <= 1:
        return roots
    den = math.lcm(*(c.denominator for c in coeffs))
    ints = [int(c * den) for c in coeffs]
    poly = UniPoly(tuple(ints))
    for num in _divisors(ints[0]):
        for den_ in _divisors(ints[-1]):
            for cand in (Fraction(num, den_), Fraction(-num, den_)):
                if poly(cand) == 0:
                    c = simplify(cand)
                    if c not in roots:
                        roots.append(c)
    return roots


# ---------------------------------------------------------------- multivariate


@dataclass(frozen=True)
class MPoly:
    """Sparse polynomial in ``nvars`` variables: sorted (exponents, coeff) pairs."""

    nvars: int
    terms: tuple = ()

    @classmethod
    def from_dict(cls, nvars: int, d: dict) -> "MPoly":
        acc: dict = {}
        for e, c in d.items():
            if len(e) != nvars:
                raise ValueError("exponent length mismatch")
            acc[e] = acc.get(e, 0) + c
        return cls(nvars, tuple(sorted((e, simplify(c)) for e, c in acc.items() if c != 0)))

    @classmethod
    def var(cls, i: int, nvars: int) -> "MPoly":
        e = tuple(1 if k == i else 0 for k in range(nvars))
        return cls(nvars, ((e, 1),))

    @classmethod
    def const(cls, c, nvars: int) -> "MPoly":
        return cls.from_dict(nvars, {(0,) * nvars: c})

    def as_dict(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, exps: tuple):
        return self.as_dict().get(tuple(exps), 0)

    def total_degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=-1)

    def lowest_degree(self) -> int:
        return min((sum(e) for e, _ in self.terms), default=-1)

    def is_homogeneous(self, degree: int) -> bool:
        return all(sum(e) == degree for e, _ in self.terms)

    def __call__(self, *values):
        return self.evaluate(values)

    def evaluate(self, values: Sequence):
        """Evaluate at values from any commutative ring (scalars, UniPoly, MPoly)."""
        if len(values) != self.nvars:
            raise ValueError("wrong number of values")
        powers: dict = {}

        def pw(i, k):
            key = (i, k)
            if key not in powers:
                v = values[i]
                r = v
                for _ in range(k - 1):
                    r = r * v
                powers[key] = r
            return powers[key]

        acc = 0
        for e, c in self.terms:
            term = c
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            acc = acc + term
        return acc

    def diff(self, i: int) -> "MPoly":
        d = {}
        for e, c in self.terms:
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                d[ne] = d.get(ne, 0) + c * e[i]
        return MPoly.from_dict(self.nvars, d)

    def gradient(self) -> tuple["MPoly", ...]:
        return tuple(self.diff(i) for i in range(self.nvars))

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            return other
        return MPoly.const(other, self.nvars)

    def __add__(self, other):
        o = self._coerce(other)
        d = self.as_dict()
        for e, c in o.terms:
            d[e] = d.get(e, 0) + c
        return MPoly.from_dict(self.nvars, d)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.nvars, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            if other == 0:
                return MPoly(self.nvars, ())
            return MPoly(self.nvars, tuple((e, simplify(c * other)) for e, c in self.terms))
        d: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                d[e] = d.get(e, 0) + c1 * c2
        return MPoly.from_dict(self.nvars, d)

    __rmul__ = __mul__

    def coefficients_in(self, i: int) -> list["MPoly"]:
        """Split as sum_k C_k * x_i^k; C_k lives in the same ring with x_i absent."""
        out: dict = {}
        for e, c in self.terms:
            k = e[i]
            ne = e[:i] + (0,) + e[i + 1:]
            out.setdefault(k, {})[ne] = c
        deg = max(out, default=-1)
        return [MPoly.from_dict(self.nvars, out.get(k, {})) for k in range(deg + 1)]

    def to_unipoly(self, i: int) -> UniPoly:
        """View as a univariate polynomial in x_i; other exponents must be zero."""
        coeffs: dict = {}
        for e, c in self.terms:
            if any(k for j, k in enumerate(e) if j != i):
                raise ValueError("polynomial depends on other variables")
            coeffs[e[i]] = c
        deg = max(coeffs, default=-1)
        return UniPoly(tuple(coeffs.get(k, 0) for k in range(deg + 1)))

    def __repr__(self):
        if not self.terms:
            return "MPoly(0)"
        parts = []
        for e, c in self.terms:
            mon = "*".join(f"x{i}^{k}" if k > 1 else f"x{i}" for i, k in enumerate(e) if k)
            parts.append(f"{format_scalar(c)}{'*' + mon if mon else ''}")
        return " + ".join(parts)


# ---------------------------------------------------------------- linear algebra


def rref(rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over the field; returns (rows, pivot columns)."""
    m = [[to_field(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[tuple]:
    """Basis of {v : rows . v = 0}, one vector per free column, in column order."""
    if ncols is None:
        ncols = len(rows[0])
    red, pivots = rref(rows) if rows else ([], [])
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [0] * ncols
        v[free] = 1
        for row, pc in zip(red, pivots):
            v[pc] = -row[free]
        basis.append(tuple(simplify(x) for x in v))
    return basis


def solve(columns: Sequence[Sequence], target: Sequence) -> tuple | None:
    """Coefficients c with sum c_j * columns[j] == target, or None."""
    n = len(columns)
    aug = [[col[i] for col in columns] + [target[i]] for i in range(len(target))]
    red, pivots = rref(aug)
    if n in pivots:
        return None
    sol = [0] * n
    for row, pc in zip(red, pivots):
        sol[pc] = row[n]
    return tuple(simplify(x) for x in sol)


def det(matrix: Sequence[Sequence]):
    """Leibniz determinant; entries may be any commutative ring elements."""
    n = len(matrix)
    total = 0
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = 1
        for i, j in enumerate(perm):
            term = term * matrix[i][j]
        total = total - term if inversions % 2 else total + term
    return total


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple[tuple, ...]:
    return tuple(tuple(simplify(sum((a[i][k] * b[k][j] for k in range(len(b))), 0))
                       for j in range(len(b[0]))) for i in range(len(a)))


def transpose(a: Sequence[Sequence]) -> tuple[tuple, ...]:
    return tuple(zip(*a))


def identity(n: int) -> tuple[tuple, ...]:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), 0)
