"""n-ary Nambu-Poisson brackets and their tensor conditions.

A bracket here is any callable taking a list of polynomials and returning
one.  The Jacobian bracket is the model example; ``tensor_bracket`` turns a
NambuTensor into a bracket via P(df_1, ..., df_r).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Callable, Sequence

from .field_algebra import DimensionMismatch, StatePolynomial, b, beta, c
from .poisson import Multivector, PoissonTensor, schouten
from .poly import Poly

Bracket = Callable[[Sequence[Poly]], Poly]


def _perm_sign(seq) -> int:
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv & 1 else 1


def _sort_with_sign(idx: tuple) -> tuple[int, tuple]:
    if len(set(idx)) != len(idx):
        return 0, ()
    return _perm_sign(idx), tuple(sorted(idx))


@dataclass(frozen=True)
class NambuTensor:
    """Totally antisymmetric r-vector field stored on increasing index tuples."""

    n: int
    order: int
    components: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.order < 2:
            raise ValueError("order must be at least 2")
        clean = {}
        for idx, p in self.components.items():
            idx = tuple(idx)
            if len(idx) != self.order:
                raise DimensionMismatch(f"index tuple {idx} does not have length {self.order}")
            if any(not 1 <= i <= self.n for i in idx):
                raise DimensionMismatch(f"index tuple {idx} outside dimension {self.n}")
            s, key = _sort_with_sign(idx)
            if not s:
                continue
            p = Poly.coerce(self.n, p) * s
            clean[key] = clean.get(key, Poly(self.n)) + p
        clean = {k: v for k, v in sorted(clean.items()) if v}
        object.__setattr__(self, "components", clean)

    def __hash__(self):
        return hash((self.n, self.order, tuple(self.components.items())))

    def __call__(self, *idx: int) -> Poly:
        """Component for an arbitrary index tuple, by antisymmetry."""
        s, key = _sort_with_sign(tuple(idx))
        if not s:
            return Poly(self.n)
        return self.components.get(key, Poly(self.n)) * s

    @classmethod
    def from_poisson(cls, P: PoissonTensor) -> "NambuTensor":
        return cls(P.n, 2, dict(P.entries))

    @classmethod
    def jacobian(cls, n: int) -> "NambuTensor":
        """The top tensor d_1 ^ ... ^ d_n, inducing the Jacobian bracket."""
        return cls(n, n, {tuple(range(1, n + 1)): Poly.constant(n)})

    def as_poisson(self) -> PoissonTensor:
        if self.order != 2:
            raise ValueError("only order-2 tensors are Poisson bivectors")
        return PoissonTensor(self.n, dict(self.components))

    def as_multivector(self) -> Multivector:
        return Multivector.from_components(self.n, self.components)

    def is_zero(self) -> bool:
        return not self.components


@dataclass
class BracketResidual:
    residual: Poly

    @property
    def vanishes(self) -> bool:
        return self.residual.is_zero()

    def __bool__(self):
        return self.vanishes


def _common_dim(fs: Sequence[Poly]) -> int:
    dims = {f.n for f in fs}
    if len(dims) != 1:
        raise DimensionMismatch(f"arguments live in different dimensions {sorted(dims)}")
    return dims.pop()


def jacobian_bracket(fs: Sequence[Poly], coords: Sequence[int] | None = None) -> Poly:
    """det [d f_i / d x_{coords[j]}]; coords default to all variables."""
    n = _common_dim(fs)
    coords = list(range(1, n + 1)) if coords is None else list(coords)
    if len(fs) != len(coords):
        raise DimensionMismatch(f"{len(fs)} functions for {len(coords)} coordinates")
    grads = [[f.diff(j) for j in coords] for f in fs]
    acc = Poly(n)
    for perm in permutations(range(len(fs))):
        term = Poly.constant(n, _perm_sign(perm))
        for row, col in enumerate(perm):
            term = term * grads[row][col]
            if term.is_zero():
                break
        acc = acc + term
    return acc


def tensor_bracket(P: NambuTensor, fs: Sequence[Poly]) -> Poly:
    """P(df_1, ..., df_r) = sum over increasing I of P^I det[d_{I_k} f_l]."""
    if len(fs) != P.order:
        raise DimensionMismatch(f"{len(fs)} arguments for a bracket of order {P.order}")
    acc = Poly(P.n)
    for idx, p in P.components.items():
        acc = acc + p * jacobian_bracket(fs, idx)
    return acc


def bracket_of(P: NambuTensor) -> Bracket:
    return lambda fs: tensor_bracket(P, fs)


def leibniz_check(bracket: Bracket, g: Poly, h: Poly, rest: Sequence[Poly]) -> BracketResidual:
    rest = list(rest)
    res = bracket([g * h] + rest) - g * bracket([h] + rest) - h * bracket([g] + rest)
    return BracketResidual(res)


def filippov_check(bracket: Bracket, g: Poly, h: Poly, f1: Poly, f2: Poly, f3: Poly) -> BracketResidual:
    lhs = bracket([g, h, bracket([f1, f2, f3])])
    rhs = (
        bracket([bracket([g, h, f1]), f2, f3])
        + bracket([f1, bracket([g, h, f2]), f3])
        + bracket([f1, f2, bracket([g, h, f3])])
    )
    return BracketResidual(lhs - rhs)


# -- tensor conditions ------------------------------------------------------


def _replace(idx: tuple, k: int, u: int) -> tuple:
    return idx[:k] + (u,) + idx[k + 1 :]


def algebraic_residuals(P: NambuTensor) -> dict:
    """Nonzero residuals of the quadratic condition, keyed (a_2..a_{r-1}, b, u, v)."""
    n, r = P.n, P.order
    rng = range(1, n + 1)
    out = {}
    for a in product(rng, repeat=r - 2):
        for bs in product(rng, repeat=r):
            for u in rng:
                for v in rng:
                    acc = Poly(n)
                    for k in range(r):
                        acc = acc + P(*_replace(bs, k, u)) * P(v, *a, bs[k])
                        acc = acc + P(*_replace(bs, k, v)) * P(u, *a, bs[k])
                    if acc:
                        out[(a, bs, u, v)] = acc
    return out


def differential_residuals(P: NambuTensor) -> dict:
    """Nonzero residuals of the first-order condition, keyed (a_1..a_{r-1}, b)."""
    n, r = P.n, P.order
    rng = range(1, n + 1)
    dP = {idx: [p.diff(u) for u in rng] for idx, p in P.components.items()}

    def d(u, idx):
        s, key = _sort_with_sign(idx)
        if not s or key not in dP:
            return Poly(n)
        return dP[key][u - 1] * s

    out = {}
    for a in product(rng, repeat=r - 1):
        for bs in product(rng, repeat=r):
            acc = Poly(n)
            for u in rng:
                acc = acc + P(*a, u) * d(u, bs)
                for k in range(r):
                    acc = acc - P(*_replace(bs, k, u)) * d(u, a + (bs[k],))
            if acc:
                out[(a, bs)] = acc
    return out


@dataclass
class TakhtajanReport:
    algebraic: dict
    differential: dict

    @property
    def passed(self) -> bool:
        return not self.algebraic and not self.differential


def takhtajan_check(P: NambuTensor) -> tuple[bool, TakhtajanReport]:
    if P.order < 3:
        raise ValueError("the tensor conditions are stated for order >= 3; use jacobi_check at order 2")
    report = TakhtajanReport(algebraic_residuals(P), differential_residuals(P))
    return report.passed, report


def fix_argument(P: NambuTensor, f: Poly) -> NambuTensor:
    """The (r-1)-tensor of {f, -, ..., -}: Q^{i_2..i_r} = sum_j d_j f P^{j i_2..i_r}."""
    if P.order < 3:
        raise ValueError("fixing an argument needs order >= 3")
    grad = Poly.coerce(P.n, f).gradient()
    comps = {}
    for rest in combinations(range(1, P.n + 1), P.order - 1):
        acc = Poly(P.n)
        for j, g in enumerate(grad, start=1):
            if g:
                acc = acc + g * P(j, *rest)
        if acc:
            comps[rest] = acc
    return NambuTensor(P.n, P.order - 1, comps)


# -- even order -------------------------------------------------------------


def nambu_density(P: NambuTensor) -> StatePolynomial:
    """Experimental density for an order-2k tensor.

    Each term P^I(gamma) gets every placement of one beta among the slots
    (sign (-1)^s for slot s, counted from 1) with c elsewhere, plus the
    correction dP^I/dx_m c_I b^m.  At order 2 this is the Poisson density.
    """
    from .quantum import poly_in_gamma

    n, r = P.n, P.order
    dens = StatePolynomial.zero(n)
    for idx, p in P.components.items():
        coef = poly_in_gamma(p)
        slots = StatePolynomial.zero(n)
        for s in range(r):
            letters = [beta(i) if t == s else c(i) for t, i in enumerate(idx)]
            slots = slots + StatePolynomial.from_letters(n, letters, (-1) ** (s + 1))
        dens = dens + coef * slots
        for m in range(1, n + 1):
            dp = p.diff(m)
            if dp:
                dens = dens + poly_in_gamma(dp) * StatePolynomial.from_letters(n, [c(i) for i in idx] + [b(m)])
    return dens


@dataclass
class BridgeResult:
    schouten_residual: Multivector
    generator: object = None
    nilpotency: object = None

    @property
    def schouten_zero(self) -> bool:
        return self.schouten_residual.is_zero()

    @property
    def built(self) -> bool:
        return self.generator is not None


def even_order_bridge(P: NambuTensor, bounds=None, convention="section2") -> BridgeResult:
    """Check [[P, P]] = 0 and, if so, build and test the experimental generator."""
    from .quantum import QuantumGenerator, Truncation, check_nilpotency

    if P.order % 2:
        raise ValueError(f"order {P.order} is odd")
    A = P.as_multivector()
    res = schouten(A, A)
    if not res.is_zero():
        return BridgeResult(res)
    owner = P.as_poisson() if P.order == 2 else P
    G = QuantumGenerator(owner, nambu_density(P), convention)
    bounds = bounds or Truncation(1, 4, (-3, 3))
    return BridgeResult(res, G, check_nilpotency(G, bounds))


def random_poly(rng, n: int, max_degree: int = 2, coeff_range: int = 3) -> Poly:
    """Dense random polynomial with integer coefficients in [-r, r]."""
    from .poly import monomials_of_degree

    terms = {}
    for d in range(max_degree + 1):
        for e in monomials_of_degree(n, d):
            v = rng.randint(-coeff_range, coeff_range)
            if v:
                terms[e] = Fraction(v)
    return Poly(n, terms)
