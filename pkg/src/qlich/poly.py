"""Sparse polynomials in x1..xn with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .field_algebra import DimensionMismatch


def _grlex(exps: tuple) -> tuple:
    return (sum(exps), exps)


class Poly:
    """Immutable polynomial; terms map exponent tuples to nonzero Fractions."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        self.n = n
        clean = {}
        if terms:
            for e, v in terms.items():
                if len(e) != n:
                    raise DimensionMismatch(f"exponent {e} does not fit dimension {n}")
                if v:
                    clean[tuple(e)] = Fraction(v)
        self.terms = clean

    @classmethod
    def _raw(cls, n, terms):
        obj = cls.__new__(cls)
        obj.n = n
        obj.terms = terms
        return obj

    @classmethod
    def constant(cls, n: int, value=1) -> "Poly":
        return cls(n, {(0,) * n: value})

    @classmethod
    def var(cls, n: int, i: int) -> "Poly":
        """The coordinate x_i (1-based)."""
        if not 1 <= i <= n:
            raise DimensionMismatch(f"x{i} outside dimension {n}")
        e = [0] * n
        e[i - 1] = 1
        return cls(n, {tuple(e): 1})

    @classmethod
    def coerce(cls, n: int, value) -> "Poly":
        if isinstance(value, Poly):
            if value.n != n:
                raise DimensionMismatch(f"dimensions {value.n} and {n} differ")
            return value
        return cls.constant(n, value)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degrees(self) -> set[int]:
        return {sum(e) for e in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: _grlex(kv[0]))

    def __add__(self, other):
        other = Poly.coerce(self.n, other)
        out = dict(self.terms)
        for e, v in other.terms.items():
            nv = out.get(e, 0) + v
            if nv:
                out[e] = nv
            else:
                out.pop(e, None)
        return Poly._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.n, {e: -v for e, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-Poly.coerce(self.n, other))

    def __rsub__(self, other):
        return Poly.coerce(self.n, other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            f = Fraction(other)
            if not f:
                return Poly._raw(self.n, {})
            return Poly._raw(self.n, {e: v * f for e, v in self.terms.items()})
        if other.n != self.n:
            raise DimensionMismatch(f"dimensions {self.n} and {other.n} differ")
        out: dict = {}
        for e1, v1 in self.terms.items():
            for e2, v2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                nv = out.get(e, 0) + v1 * v2
                if nv:
                    out[e] = nv
                else:
                    out.pop(e, None)
        return Poly._raw(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        out = Poly.constant(self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(self.n, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def diff(self, i: int) -> "Poly":
        """Partial derivative by x_i (1-based)."""
        k = i - 1
        out = {}
        for e, v in self.terms.items():
            if e[k]:
                ne = e[:k] + (e[k] - 1,) + e[k + 1 :]
                out[ne] = v * e[k]
        return Poly._raw(self.n, out)

    def gradient(self) -> list["Poly"]:
        return [self.diff(i) for i in range(1, self.n + 1)]

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly._raw(self.n, {e: v for e, v in self.terms.items() if sum(e) == d})

    def __repr__(self):
        from .render import render_poly

        return f"Poly({self.n}, {render_poly(self)!r})"

    def __str__(self):
        from .render import render_poly

        return render_poly(self)


def monomials_of_degree(n: int, d: int) -> list[tuple]:
    """Exponent tuples of total degree d, in descending lexicographic order."""
    if n == 0:
        return [()] if d == 0 else []
    out = []
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - first):
            out.append((first,) + rest)
    return out


def poly_sum(polys: Iterable[Poly], n: int) -> Poly:
    acc = Poly(n)
    for p in polys:
        acc = acc + p
    return acc
