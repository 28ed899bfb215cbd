"""Normally ordered words in the bc-beta-gamma free fields.

The state space is the supercommutative polynomial algebra generated by
the letters ``d^k b^i, d^k c_i, d^k beta_i, d^k gamma^i`` (``d`` the formal
z-derivative).  ``b`` and ``c`` are odd, ``beta`` and ``gamma`` even.
Coefficients live in Q[hbar]; a term is keyed by ``(word, hbar_power)``.

Canonical letter order: kind (b < c < beta < gamma), then index, then
derivative order.  Reordering a word multiplies it by the Koszul sign.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple

from . import linalg


class DimensionMismatch(ValueError):
    pass


class NotHomogeneous(ValueError):
    pass


class Kind(enum.IntEnum):
    B = 0
    C = 1
    BETA = 2
    GAMMA = 3


ODD_KINDS = (Kind.B, Kind.C)


class Generator(NamedTuple):
    kind: Kind
    index: int
    deriv: int = 0

    @property
    def odd(self) -> bool:
        return self.kind <= Kind.C

    @property
    def weight(self) -> int:
        return self.deriv + (1 if self.kind in (Kind.B, Kind.BETA) else 0)

    @property
    def fermion(self) -> int:
        if self.kind == Kind.C:
            return 1
        if self.kind == Kind.B:
            return -1
        return 0

    def shifted(self, m: int) -> "Generator":
        return Generator(self.kind, self.index, self.deriv + m)

    def __repr__(self) -> str:
        from .render import render_letter

        return render_letter(self)


def b(i: int, deriv: int = 0) -> Generator:
    return Generator(Kind.B, i, deriv)


def c(i: int, deriv: int = 0) -> Generator:
    return Generator(Kind.C, i, deriv)


def beta(i: int, deriv: int = 0) -> Generator:
    return Generator(Kind.BETA, i, deriv)


def gamma(i: int, deriv: int = 0) -> Generator:
    return Generator(Kind.GAMMA, i, deriv)


Word = tuple  # tuple[Generator, ...] in canonical order


def koszul_sign(letters: Iterable[Generator]) -> int:
    """Sign of sorting ``letters`` into canonical order (odd letters only)."""
    odd = [g for g in letters if g.kind <= Kind.C]
    inv = 0
    for i in range(len(odd)):
        gi = odd[i]
        for j in range(i + 1, len(odd)):
            if odd[j] < gi:
                inv += 1
    return -1 if inv & 1 else 1


def normalize_word(letters: Iterable[Generator]) -> tuple[int, Word]:
    """Return ``(sign, canonical word)``; sign 0 when an odd letter repeats."""
    letters = tuple(letters)
    word = tuple(sorted(letters))
    prev = None
    for g in word:
        if g == prev and g.kind <= Kind.C:
            return 0, ()
        prev = g
    return koszul_sign(letters), word


def word_weight(word: Word) -> int:
    return sum(g.weight for g in word)


def word_fermion(word: Word) -> int:
    return sum(g.fermion for g in word)


def word_parity(word: Word) -> int:
    return sum(1 for g in word if g.kind <= Kind.C) & 1


def word_max_deriv(word: Word) -> int:
    return max((g.deriv for g in word), default=0)


@dataclass(frozen=True, order=True)
class Bidegree:
    """A finite graded piece: fixed conformal weight, fermion number and length."""

    weight: int
    fermion: int
    letters: int


@dataclass(frozen=True)
class Monomial:
    coeff: Fraction
    word: Word
    hbar: int = 0


def normalize(letters: Iterable[Generator], coeff=1, hbar: int = 0) -> Monomial:
    sign, word = normalize_word(letters)
    return Monomial(Fraction(coeff) * sign, word, hbar)


class StatePolynomial:
    """Finite Q[hbar]-linear combination of canonical words.

    Immutable; arithmetic returns new objects.  The zero polynomial has no
    terms.
    """

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: dict | None = None):
        self.n = n
        self._terms: dict[tuple[Word, int], Fraction] = {}
        if terms:
            for key, v in terms.items():
                if v:
                    self._terms[key] = Fraction(v)
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def _raw(cls, n: int, terms: dict) -> "StatePolynomial":
        obj = cls.__new__(cls)
        obj.n = n
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, n: int) -> "StatePolynomial":
        return cls._raw(n, {})

    @classmethod
    def constant(cls, n: int, value=1, hbar: int = 0) -> "StatePolynomial":
        return cls(n, {((), hbar): value})

    @classmethod
    def from_letters(cls, n: int, letters: Iterable[Generator], coeff=1, hbar: int = 0) -> "StatePolynomial":
        letters = tuple(letters)
        for g in letters:
            if not 1 <= g.index <= n:
                raise DimensionMismatch(f"letter {g!r} outside dimension {n}")
        sign, word = normalize_word(letters)
        if not sign or not coeff:
            return cls.zero(n)
        return cls._raw(n, {(word, hbar): Fraction(coeff) * sign})

    @classmethod
    def letter(cls, n: int, g: Generator) -> "StatePolynomial":
        return cls.from_letters(n, (g,))

    @classmethod
    def from_monomials(cls, n: int, monomials: Iterable[Monomial]) -> "StatePolynomial":
        acc: dict = {}
        for m in monomials:
            if m.coeff:
                linalg.add_scaled(acc, {(m.word, m.hbar): m.coeff}, 1)
        return cls._raw(n, acc)

    # access ---------------------------------------------------------------
    def items(self):
        return self._terms.items()

    def terms(self) -> list[Monomial]:
        return [Monomial(v, w, h) for (w, h), v in sorted(self._terms.items(), key=_term_key)]

    def as_vector(self) -> dict:
        return dict(self._terms)

    def coefficient(self, letters: Iterable[Generator], hbar: int = 0) -> Fraction:
        sign, word = normalize_word(letters)
        if not sign:
            return Fraction(0)
        return sign * self._terms.get((word, hbar), Fraction(0))

    def words(self) -> set:
        return {w for w, _ in self._terms}

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self.terms())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    # gradings -------------------------------------------------------------
    def weights(self) -> set[int]:
        return {word_weight(w) for w, _ in self._terms}

    def fermions(self) -> set[int]:
        return {word_fermion(w) for w, _ in self._terms}

    def letter_counts(self) -> set[int]:
        return {len(w) for w, _ in self._terms}

    def hbar_degrees(self) -> set[int]:
        return {h for _, h in self._terms}

    def parities(self) -> set[int]:
        return {word_parity(w) for w, _ in self._terms}

    def max_deriv(self) -> int:
        return max((word_max_deriv(w) for w, _ in self._terms), default=0)

    # arithmetic -----------------------------------------------------------
    def _check(self, other: "StatePolynomial") -> None:
        if self.n != other.n:
            raise DimensionMismatch(f"dimensions {self.n} and {other.n} differ")

    def __add__(self, other):
        if not isinstance(other, StatePolynomial):
            return NotImplemented
        self._check(other)
        acc = dict(self._terms)
        linalg.add_scaled(acc, other._terms, 1)
        return StatePolynomial._raw(self.n, acc)

    def __sub__(self, other):
        if not isinstance(other, StatePolynomial):
            return NotImplemented
        self._check(other)
        acc = dict(self._terms)
        linalg.add_scaled(acc, other._terms, -1)
        return StatePolynomial._raw(self.n, acc)

    def __neg__(self):
        return StatePolynomial._raw(self.n, {k: -v for k, v in self._terms.items()})

    def scale(self, factor, hbar: int = 0) -> "StatePolynomial":
        factor = Fraction(factor)
        if not factor:
            return StatePolynomial.zero(self.n)
        return StatePolynomial._raw(
            self.n, {(w, h + hbar): v * factor for (w, h), v in self._terms.items()}
        )

    def __mul__(self, other):
        if isinstance(other, StatePolynomial):
            return multiply(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "StatePolynomial":
        out = StatePolynomial.constant(self.n)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, StatePolynomial):
            return self.n == other.n and self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        from .render import render_state

        return f"StatePolynomial({self.n}, {render_state(self)!r})"

    def __str__(self) -> str:
        from .render import render_state

        return render_state(self)


def _term_key(item):
    (w, h), _ = item
    return (h, len(w), w)


def multiply(a: StatePolynomial, b: StatePolynomial) -> StatePolynomial:
    a._check(b)
    acc: dict = {}
    for (wa, ha), va in a._terms.items():
        for (wb, hb), vb in b._terms.items():
            sign, word = normalize_word(wa + wb)
            if sign:
                key = (word, ha + hb)
                nv = acc.get(key, 0) + sign * va * vb
                if nv:
                    acc[key] = nv
                else:
                    acc.pop(key, None)
    return StatePolynomial._raw(a.n, acc)


def d_z_word(word: Word) -> dict:
    """Leibniz rule on a single canonical word; returns {word: coeff}."""
    out: dict = {}
    for i in range(len(word)):
        letters = word[:i] + (word[i].shifted(1),) + word[i + 1 :]
        sign, w = normalize_word(letters)
        if sign:
            nv = out.get(w, 0) + sign
            if nv:
                out[w] = nv
            else:
                del out[w]
    return out


def d_z(s: StatePolynomial) -> StatePolynomial:
    acc: dict = {}
    for (w, h), v in s.items():
        for w2, m in d_z_word(w).items():
            linalg.add_scaled(acc, {(w2, h): v * m}, 1)
    return StatePolynomial._raw(s.n, acc)


def generators_up_to(n: int, max_weight: int) -> list[Generator]:
    gens = []
    for kind in Kind:
        base = 1 if kind in (Kind.B, Kind.BETA) else 0
        for i in range(1, n + 1):
            for d in range(0, max_weight - base + 1):
                gens.append(Generator(kind, i, d))
    return sorted(gens)


def enumerate_basis(n: int, bd: Bidegree) -> list[Word]:
    """All canonical words of the given weight, fermion number and length."""
    if bd.letters < 0 or bd.weight < 0:
        return []
    gens = generators_up_to(n, bd.weight)
    out: list[Word] = []
    L = bd.letters

    def rec(start: int, word: list, weight: int, fermion: int) -> None:
        left = L - len(word)
        if left == 0:
            if weight == bd.weight and fermion == bd.fermion:
                out.append(tuple(word))
            return
        # every remaining letter changes fermion by at most one
        if abs(bd.fermion - fermion) > left:
            return
        for k in range(start, len(gens)):
            g = gens[k]
            if weight + g.weight > bd.weight:
                continue
            word.append(g)
            rec(k + 1 if g.kind <= Kind.C else k, word, weight + g.weight, fermion + g.fermion)
            word.pop()

    rec(0, [], 0, 0)
    return out


def enumerate_words(n: int, max_weight: int, max_letters: int, fermions=None) -> list[Word]:
    """Every canonical word with weight <= max_weight and length <= max_letters."""
    words = []
    for w in range(max_weight + 1):
        for L in range(max_letters + 1):
            for f in range(-L, L + 1):
                if fermions is not None and f not in fermions:
                    continue
                words.extend(enumerate_basis(n, Bidegree(w, f, L)))
    return words


def homogeneous_degrees(s: StatePolynomial) -> tuple[int, int]:
    ws, fs = s.weights(), s.fermions()
    if len(ws) > 1 or len(fs) > 1:
        raise NotHomogeneous(f"weights {sorted(ws)}, fermion numbers {sorted(fs)}")
    return ws.pop(), fs.pop()


def is_total_derivative(s: StatePolynomial) -> tuple[bool, StatePolynomial | None]:
    """Decide whether ``s`` lies in the image of ``d_z``; return a preimage.

    ``d_z`` preserves letter count and hbar degree and raises weight by one,
    so the preimage is searched piecewise on the enumerated weight-(w-1)
    pieces.
    """
    if s.is_zero():
        return True, StatePolynomial.zero(s.n)
    w, f = homogeneous_degrees(s)
    if w == 0:
        return False, None
    pieces: dict[tuple[int, int], dict] = {}
    for (word, h), v in s.items():
        pieces.setdefault((len(word), h), {})[word] = v
    witness: dict = {}
    for (L, h), target in sorted(pieces.items()):
        basis = enumerate_basis(s.n, Bidegree(w - 1, f, L))
        cols = [d_z_word(word) for word in basis]
        x = linalg.solve(cols, target)
        if x is None:
            return False, None
        for i, v in x.items():
            witness[(basis[i], h)] = v
    return True, StatePolynomial(s.n, witness)
