"""Polynomial multivector calculus on R^n.

Multivector fields are stored as superfunctions: polynomials in the
coordinates ``x_i`` and odd variables ``xi_i`` standing for ``d/dx_i``.  A
key is ``(xi_indices, exponents)`` with strictly increasing indices.

Schouten bracket (one place where its sign is fixed)::

    [[A, B]] = sum_i (A <d/dxi_i)(d/dx_i B) - (A <d/dx_i)(d/dxi_i> B)

with ``<`` a right and ``>`` a left derivative.  It restricts to the Lie
bracket on vector fields and to ``X(f)`` on a vector field and a function.
The Lichnerowicz differential is ``d_L(A) = -[[P, A]]``, normalized so that
``d_L(f)`` is the Hamiltonian vector field ``{f, -}`` with
``{f, g} = sum_ij P^ij d_i f d_j g``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .cohomology import CohomologyCell, CohomologyReport, cell_cohomology
from .field_algebra import DimensionMismatch
from .poly import Poly, monomials_of_degree

LICHNEROWICZ_SIGN = -1


class JacobiFailure(ValueError):
    pass


def _merge_xi(left: tuple, right: tuple) -> tuple[int, tuple]:
    """Sign and sorted index tuple of the product xi_left * xi_right."""
    if set(left) & set(right):
        return 0, ()
    seq = left + right
    inv = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return (-1 if inv & 1 else 1), tuple(sorted(seq))


class Multivector:
    """Formal sum of k-vector fields with polynomial coefficients."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        self.n = n
        self.terms: dict = {}
        for (idx, e), v in (terms or {}).items():
            idx = tuple(idx)
            if list(idx) != sorted(set(idx)):
                raise ValueError(f"index tuple {idx} must be strictly increasing")
            if any(not 1 <= i <= n for i in idx) or len(e) != n:
                raise DimensionMismatch(f"term {idx, e} does not fit dimension {n}")
            if v:
                self.terms[(idx, tuple(e))] = Fraction(v)

    @classmethod
    def _raw(cls, n, terms):
        obj = cls.__new__(cls)
        obj.n = n
        obj.terms = terms
        return obj

    @classmethod
    def from_components(cls, n: int, comps: dict) -> "Multivector":
        """Build from {index tuple: Poly}; tuples are sorted with sign."""
        acc: dict = {}
        for idx, p in comps.items():
            p = Poly.coerce(n, p)
            idx = tuple(idx)
            if len(set(idx)) != len(idx):
                continue
            s, key = _merge_xi(idx, ())
            for e, v in p.terms.items():
                k = (key, e)
                nv = acc.get(k, 0) + s * v
                if nv:
                    acc[k] = nv
                else:
                    acc.pop(k, None)
        return cls._raw(n, acc)

    @classmethod
    def function(cls, p: Poly) -> "Multivector":
        return cls.from_components(p.n, {(): p})

    @classmethod
    def basis_field(cls, n: int, *idx: int) -> "Multivector":
        return cls.from_components(n, {tuple(idx): Poly.constant(n)})

    def components(self) -> dict[tuple, Poly]:
        out: dict = {}
        for (idx, e), v in self.terms.items():
            out.setdefault(idx, {})[e] = v
        return {idx: Poly(self.n, t) for idx, t in sorted(out.items())}

    def component(self, *idx: int) -> Poly:
        return self.components().get(tuple(idx), Poly(self.n))

    def degrees(self) -> set[int]:
        return {len(idx) for idx, _ in self.terms}

    def homogeneous_part(self, k: int) -> "Multivector":
        return Multivector._raw(self.n, {key: v for key, v in self.terms.items() if len(key[0]) == k})

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other):
        if self.n != other.n:
            raise DimensionMismatch(f"dimensions {self.n} and {other.n} differ")

    def __add__(self, other):
        self._check(other)
        acc = dict(self.terms)
        for k, v in other.terms.items():
            nv = acc.get(k, 0) + v
            if nv:
                acc[k] = nv
            else:
                acc.pop(k, None)
        return Multivector._raw(self.n, acc)

    def __neg__(self):
        return Multivector._raw(self.n, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f) -> "Multivector":
        f = Fraction(f)
        if not f:
            return Multivector(self.n)
        return Multivector._raw(self.n, {k: v * f for k, v in self.terms.items()})

    def __mul__(self, other):
        """Wedge product."""
        if not isinstance(other, Multivector):
            return self.scale(other)
        self._check(other)
        acc: dict = {}
        for (i1, e1), v1 in self.terms.items():
            for (i2, e2), v2 in other.terms.items():
                s, idx = _merge_xi(i1, i2)
                if not s:
                    continue
                k = (idx, tuple(a + b for a, b in zip(e1, e2)))
                nv = acc.get(k, 0) + s * v1 * v2
                if nv:
                    acc[k] = nv
                else:
                    acc.pop(k, None)
        return Multivector._raw(self.n, acc)

    __rmul__ = scale

    def __eq__(self, other):
        if isinstance(other, Multivector):
            return self.n == other.n and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    # superfunction derivatives ---------------------------------------------
    def dx(self, i: int) -> "Multivector":
        k = i - 1
        acc = {}
        for (idx, e), v in self.terms.items():
            if e[k]:
                acc[(idx, e[:k] + (e[k] - 1,) + e[k + 1 :])] = v * e[k]
        return Multivector._raw(self.n, acc)

    def dxi_left(self, i: int) -> "Multivector":
        acc = {}
        for (idx, e), v in self.terms.items():
            if i in idx:
                pos = idx.index(i)
                acc[(idx[:pos] + idx[pos + 1 :], e)] = v if pos % 2 == 0 else -v
        return Multivector._raw(self.n, acc)

    def dxi_right(self, i: int) -> "Multivector":
        acc = {}
        for (idx, e), v in self.terms.items():
            if i in idx:
                pos = idx.index(i)
                after = len(idx) - pos - 1
                acc[(idx[:pos] + idx[pos + 1 :], e)] = v if after % 2 == 0 else -v
        return Multivector._raw(self.n, acc)

    def __repr__(self):
        parts = []
        for idx, p in self.components().items():
            field_ = "^".join(f"d{i}" for i in idx) or "1"
            parts.append(f"({p})*{field_}")
        return f"Multivector({self.n}, {' + '.join(parts) or '0'})"


@dataclass(frozen=True)
class PoissonTensor:
    """Bivector ``sum_{i<j} P^ij d_i ^ d_j`` stored strictly upper triangular."""

    n: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), p in self.entries.items():
            if not (1 <= i < j <= self.n):
                raise ValueError(f"entry P[{i},{j}] must satisfy 1 <= i < j <= {self.n}")
            p = Poly.coerce(self.n, p)
            if p:
                clean[(i, j)] = p
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    def __hash__(self):
        return hash((self.n, tuple(self.entries.items())))

    def __call__(self, i: int, j: int) -> Poly:
        """Antisymmetric extension P^ij."""
        if i == j:
            return Poly(self.n)
        if i < j:
            return self.entries.get((i, j), Poly(self.n))
        return -self.entries.get((j, i), Poly(self.n))

    def as_multivector(self) -> Multivector:
        return Multivector.from_components(self.n, self.entries)

    def degrees(self) -> set[int]:
        out = set()
        for p in self.entries.values():
            out |= p.degrees()
        return out

    def homogeneous_degree(self) -> int | None:
        ds = self.degrees()
        if len(ds) == 1:
            return ds.pop()
        return 0 if not ds else None

    def is_zero(self) -> bool:
        return not self.entries


def jacobi_check(P: PoissonTensor) -> tuple[bool, Multivector]:
    """Evaluate the cyclic Jacobi sum for all i<j<k; residual as a 3-vector."""
    n = P.n
    comps = {}
    for i, j, k in combinations(range(1, n + 1), 3):
        acc = Poly(n)
        for l in range(1, n + 1):
            acc = acc + P(l, j) * P(i, k).diff(l) + P(l, i) * P(k, j).diff(l) + P(l, k) * P(j, i).diff(l)
        if acc:
            comps[(i, j, k)] = acc
    res = Multivector.from_components(n, comps)
    return res.is_zero(), res


def schouten(A: Multivector, B: Multivector) -> Multivector:
    A._check(B)
    out = Multivector(A.n)
    for i in range(1, A.n + 1):
        out = out + A.dxi_right(i) * B.dx(i) - A.dx(i) * B.dxi_left(i)
    return out


def lichnerowicz_d(P: PoissonTensor, A: Multivector) -> Multivector:
    return schouten(P.as_multivector(), A).scale(LICHNEROWICZ_SIGN)


def hamiltonian_field(P: PoissonTensor, f: Poly) -> Multivector:
    """X_f = sum_ij P^ij d_i f d_j."""
    comps = {}
    for j in range(1, P.n + 1):
        acc = Poly(P.n)
        for i in range(1, P.n + 1):
            acc = acc + P(i, j) * f.diff(i)
        comps[(j,)] = acc
    return Multivector.from_components(P.n, comps)


def multivector_basis(n: int, k: int, e: int) -> list[tuple]:
    """Keys (index tuple, exponents) of k-vectors with degree-e coefficients."""
    return [(idx, mono) for idx in combinations(range(1, n + 1), k) for mono in monomials_of_degree(n, e)]


def _basis_vector(n, key) -> Multivector:
    return Multivector._raw(n, {key: Fraction(1)})


def _key_order(key):
    idx, e = key
    return (len(idx), sum(e), idx, tuple(-x for x in e))


def lp_cohomology(P: PoissonTensor, max_poly_degree: int) -> CohomologyReport:
    """Polynomial LP cohomology per (multivector degree, coefficient degree).

    For P homogeneous of degree d the differential maps (k, e) to
    (k+1, e+d-1) and each cell is exact.  Otherwise each multivector degree
    is one band with coefficients of degree <= max_poly_degree, flagged as
    truncated.
    """
    ok, _ = jacobi_check(P)
    if not ok:
        raise JacobiFailure("tensor does not satisfy the Jacobi identity")
    n = P.n
    d = P.homogeneous_degree()
    cache: dict = {}

    def apply(key):
        if key not in cache:
            img = lichnerowicz_d(P, _basis_vector(n, key))
            cache[key] = dict(img.terms)
        return cache[key]

    cells = []
    if d is not None:
        shift = d - 1
        for k in range(n + 1):
            for e in range(max_poly_degree + 1):
                basis = multivector_basis(n, k, e)
                lower = multivector_basis(n, k - 1, e - shift) if k >= 1 and e - shift >= 0 else []
                cell = cell_cohomology((k, e), basis, apply, lower, order=_key_order)
                cells.append(_to_multivectors(n, cell))
    else:
        for k in range(n + 1):
            basis = [key for e in range(max_poly_degree + 1) for key in multivector_basis(n, k, e)]
            lower = [key for e in range(max_poly_degree + 1) for key in multivector_basis(n, k - 1, e)] if k else []
            cell = cell_cohomology((k, max_poly_degree), basis, apply, lower, order=_key_order, banded=True)
            cells.append(_to_multivectors(n, cell))
    return CohomologyReport(
        grading=("degree", "poly_degree"),
        cells=cells,
        metadata={"n": n, "max_poly_degree": max_poly_degree, "homogeneous_degree": d},
    )


def _to_multivectors(n, cell: CohomologyCell) -> CohomologyCell:
    reps = [Multivector._raw(n, dict(v)) for v in cell.representatives]
    return CohomologyCell(cell.grading, cell.kernel_dim, cell.image_dim, cell.dim, reps, cell.truncated)


def to_state(A: Multivector):
    """Dictionary x_i -> gamma^i, d/dx_i -> c_i."""
    from .field_algebra import StatePolynomial, c, gamma

    acc = StatePolynomial.zero(A.n)
    for (idx, e), v in A.terms.items():
        letters = [c(i) for i in idx]
        for i, k in enumerate(e, start=1):
            letters.extend([gamma(i)] * k)
        acc = acc + StatePolynomial.from_letters(A.n, letters, v)
    return acc
