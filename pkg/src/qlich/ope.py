"""Wick-contraction OPEs of normally ordered words and the residue bracket.

For words ``u`` at z and ``v`` at w, every nonempty set of disjoint
conjugate cross-pairs contributes: the product of pair kernels, the Koszul
sign of bringing each contracted z-letter next to its w-partner, and the
leftover letters with the z-ones Taylor expanded around w.  Each
contraction carries one power of hbar.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .field_algebra import (
    DimensionMismatch,
    Generator,
    Kind,
    StatePolynomial,
    normalize_word,
)

_CONJUGATE = {Kind.B: Kind.C, Kind.C: Kind.B, Kind.BETA: Kind.GAMMA, Kind.GAMMA: Kind.BETA}


@dataclass(frozen=True)
class OpeConvention:
    """Signs s(x, y) in ``x(z) y(w) ~ s * hbar / (z - w)``."""

    name: str
    b_c: int = 1
    c_b: int = 1
    beta_gamma: int = -1
    gamma_beta: int = 1

    def sign(self, x: Kind, y: Kind) -> int:
        if x == Kind.B:
            return self.b_c
        if x == Kind.C:
            return self.c_b
        if x == Kind.BETA:
            return self.beta_gamma
        return self.gamma_beta


SECTION2 = OpeConvention("section2", 1, 1, -1, 1)
SECTION4 = OpeConvention("section4", 1, 1, 1, -1)
CONVENTIONS = {c.name: c for c in (SECTION2, SECTION4)}


def get_convention(conv) -> OpeConvention:
    if isinstance(conv, OpeConvention):
        return conv
    try:
        return CONVENTIONS[conv]
    except KeyError:
        raise ValueError(f"unknown OPE convention {conv!r}; expected one of {sorted(CONVENTIONS)}") from None


def contraction_kernel(x: Generator, y: Generator, conv=SECTION2) -> tuple[int, int]:
    """Return ``(coefficient, pole order)`` of the contraction x(z) y(w).

    The coefficient multiplies ``hbar / (z - w)**pole``; ``(0, 0)`` for a
    non-conjugate pair.
    """
    if x.index != y.index or _CONJUGATE[x.kind] != y.kind:
        return 0, 0
    conv = get_convention(conv)
    p, q = x.deriv, y.deriv
    coeff = conv.sign(x.kind, y.kind) * (-1) ** p * factorial(p + q)
    return coeff, p + q + 1


def _matchings(u, v, limit):
    """Yield lists of (i, j) pairs: nonempty partial matchings, at most ``limit`` pairs."""
    partners = []
    for x in u:
        partners.append([j for j, y in enumerate(v) if y.index == x.index and _CONJUGATE[x.kind] == y.kind])
    used = [False] * len(v)
    cur: list = []

    def rec(i):
        if i == len(u):
            if cur:
                yield list(cur)
            return
        yield from rec(i + 1)
        if len(cur) >= limit:
            return
        for j in partners[i]:
            if not used[j]:
                used[j] = True
                cur.append((i, j))
                yield from rec(i + 1)
                cur.pop()
                used[j] = False

    yield from rec(0)


def _pairing_sign(u, v, pairs) -> int:
    """Koszul sign of reordering ``u + v`` into ``u_rest, x1 y1, x2 y2, ..., v_rest``."""
    iu = {i for i, _ in pairs}
    jv = {j for _, j in pairs}
    order = [i for i in range(len(u)) if i not in iu]
    for i, j in pairs:
        order.append(i)
        order.append(len(u) + j)
    order.extend(len(u) + j for j in range(len(v)) if j not in jv)
    full = u + v
    odd_pos = [p for p in order if full[p].kind <= Kind.C]
    inv = 0
    for a in range(len(odd_pos)):
        for b_ in range(a + 1, len(odd_pos)):
            if odd_pos[b_] < odd_pos[a]:
                inv += 1
    return -1 if inv & 1 else 1


def _compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def contract_words(u, v, conv=SECTION2, poles=None, contractions=None):
    """Singular terms of ``:u:(z) :v:(w)``.

    Yields ``(pole, n_contractions, coeff, word)``.  ``poles`` restricts the
    retained pole orders, ``contractions`` the allowed number of pairs.
    """
    conv = get_convention(conv)
    limit = min(len(u), len(v))
    if contractions is not None:
        limit = min(limit, contractions)
    for pairs in _matchings(u, v, limit):
        k = len(pairs)
        if contractions is not None and k != contractions:
            continue
        coeff = 1
        total_pole = 0
        for i, j in pairs:
            kc, kp = contraction_kernel(u[i], v[j], conv)
            coeff *= kc
            total_pole += kp
        coeff *= _pairing_sign(u, v, pairs)
        iu = {i for i, _ in pairs}
        jv = {j for _, j in pairs}
        rest_u = [u[i] for i in range(len(u)) if i not in iu]
        rest_v = tuple(v[j] for j in range(len(v)) if j not in jv)
        for pole in range(total_pole, 0, -1):
            if poles is not None and pole not in poles:
                continue
            shift = total_pole - pole
            for comp in _compositions(shift, len(rest_u)):
                t = Fraction(coeff)
                for m in comp:
                    if m > 1:
                        t /= factorial(m)
                letters = tuple(g.shifted(m) for g, m in zip(rest_u, comp)) + rest_v
                sign, word = normalize_word(letters)
                if sign:
                    yield pole, k, t * sign, word


@dataclass
class OpeExpansion:
    """Singular part of A(z)B(w): pole order -> coefficient field at w."""

    n: int
    poles: dict

    def __getitem__(self, k: int) -> StatePolynomial:
        return self.poles.get(k, StatePolynomial.zero(self.n))

    def max_pole(self) -> int:
        return max(self.poles, default=0)

    def is_empty(self) -> bool:
        return not self.poles


def _accumulate(a: StatePolynomial, b: StatePolynomial, conv, poles=None, contractions=None) -> dict:
    out: dict[int, dict] = {}
    for (wa, ha), va in a.items():
        for (wb, hb), vb in b.items():
            base = va * vb
            for pole, k, t, word in contract_words(wa, wb, conv, poles, contractions):
                acc = out.setdefault(pole, {})
                key = (word, ha + hb + k)
                nv = acc.get(key, 0) + base * t
                if nv:
                    acc[key] = nv
                else:
                    acc.pop(key, None)
    return out


def ope(a: StatePolynomial, b: StatePolynomial, conv=SECTION2) -> OpeExpansion:
    if a.n != b.n:
        raise DimensionMismatch(f"dimensions {a.n} and {b.n} differ")
    raw = _accumulate(a, b, conv)
    poles = {p: StatePolynomial(a.n, t) for p, t in sorted(raw.items()) if t}
    return OpeExpansion(a.n, poles)


class IntegratedOperator:
    """The residue action ``{oint J(z) dz, -}`` of a density ``J``.

    Results on single words are memoized; the operator is otherwise
    stateless.
    """

    def __init__(self, density: StatePolynomial, convention=SECTION2):
        self.density = density
        self.convention = get_convention(convention)
        self.n = density.n
        self._cache: dict = {}
        self._dens = list(density.items())

    def apply_word(self, word, contractions=None) -> dict:
        """Residue on one word (hbar degree 0); returns {(word, hbar): coeff}."""
        key = (word, contractions)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        acc: dict = {}
        for (wj, hj), vj in self._dens:
            for _, k, t, w in contract_words(wj, word, self.convention, (1,), contractions):
                kk = (w, hj + k)
                nv = acc.get(kk, 0) + vj * t
                if nv:
                    acc[kk] = nv
                else:
                    acc.pop(kk, None)
        self._cache[key] = acc
        return acc

    def __call__(self, s: StatePolynomial, contractions=None) -> StatePolynomial:
        if s.n != self.n:
            raise DimensionMismatch(f"dimensions {self.n} and {s.n} differ")
        acc: dict = {}
        for (w, h), v in s.items():
            for (w2, h2), t in self.apply_word(w, contractions).items():
                key = (w2, h2 + h)
                nv = acc.get(key, 0) + v * t
                if nv:
                    acc[key] = nv
                else:
                    acc.pop(key, None)
        return StatePolynomial._raw(self.n, acc)


def bracket_action(J, s: StatePolynomial, conv=None) -> StatePolynomial:
    """Residue of ``J(z) s(w)``; ``J`` is an IntegratedOperator or a density."""
    if not isinstance(J, IntegratedOperator):
        J = IntegratedOperator(J, conv if conv is not None else SECTION2)
    return J(s)


def hbar_component(s: StatePolynomial, k: int) -> StatePolynomial:
    return StatePolynomial._raw(s.n, {(w, 0): v for (w, h), v in s.items() if h == k})


__all__ = [
    "OpeConvention",
    "SECTION2",
    "SECTION4",
    "get_convention",
    "contraction_kernel",
    "contract_words",
    "OpeExpansion",
    "ope",
    "IntegratedOperator",
    "bracket_action",
    "hbar_component",
]
