"""Quantum Lichnerowicz and chiral de Rham operators on the bc-beta-gamma system.

The quantum Lichnerowicz operator of a bivector P is the residue action of

    J = sum_{i<j} P^ij(gamma) (c_i beta_j - beta_i c_j)
        + sum_{i<j,k} d_k P^ij(gamma) c_i c_j b^k

and the chiral de Rham operator that of ``sum_i d_z(gamma^i) c_i``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .cohomology import CohomologyReport, cell_cohomology
from .field_algebra import (
    Bidegree,
    StatePolynomial,
    b,
    beta,
    c,
    enumerate_basis,
    gamma,
    is_total_derivative,
    word_fermion,
    word_weight,
)
from . import linalg
from .ope import SECTION2, SECTION4, IntegratedOperator, get_convention, hbar_component, ope
from .poisson import PoissonTensor
from .poly import Poly


def poly_in_gamma(p: Poly) -> StatePolynomial:
    """Substitute x_m -> gamma^m."""
    terms = {}
    for e, v in p.terms.items():
        word = tuple(g for i, k in enumerate(e, start=1) for g in [gamma(i)] * k)
        terms[(word, 0)] = v
    return StatePolynomial(p.n, terms)


def lichnerowicz_density(P: PoissonTensor) -> StatePolynomial:
    n = P.n
    L = lambda *gs: StatePolynomial.from_letters(n, gs)  # noqa: E731
    dens = StatePolynomial.zero(n)
    for (i, j), p in P.entries.items():
        coef = poly_in_gamma(p)
        dens = dens + coef * (L(c(i), beta(j)) - L(beta(i), c(j)))
        for k in range(1, n + 1):
            dp = p.diff(k)
            if dp:
                dens = dens + poly_in_gamma(dp) * L(c(i), c(j), b(k))
    return dens


@dataclass
class QuantumGenerator:
    P: PoissonTensor | None
    density: StatePolynomial
    convention: object = SECTION2
    operator: IntegratedOperator = field(init=False, repr=False)

    def __post_init__(self):
        self.convention = get_convention(self.convention)
        self.operator = IntegratedOperator(self.density, self.convention)

    @property
    def n(self) -> int:
        return self.density.n

    def with_convention(self, conv) -> "QuantumGenerator":
        return QuantumGenerator(self.P, self.density, conv)

    def __call__(self, s: StatePolynomial) -> StatePolynomial:
        return self.operator(s)


def build_generator(P: PoissonTensor, conv=SECTION2) -> QuantumGenerator:
    return QuantumGenerator(P, lichnerowicz_density(P), conv)


def apply_dqL(G: QuantumGenerator, s: StatePolynomial) -> StatePolynomial:
    return G.operator(s)


def apply_hbar1(G: QuantumGenerator, s: StatePolynomial) -> StatePolynomial:
    if s.hbar_degrees() <= {0}:
        # on hbar-free input the hbar^1 part is exactly the single contractions
        return hbar_component(G.operator(s, contractions=1), 1)
    return hbar_component(G.operator(s), 1)


def chiral_density(n: int) -> StatePolynomial:
    acc = StatePolynomial.zero(n)
    for i in range(1, n + 1):
        acc = acc + StatePolynomial.from_letters(n, (gamma(i, 1), c(i)))
    return acc


def build_chiral(n: int, conv=SECTION2) -> IntegratedOperator:
    return IntegratedOperator(chiral_density(n), conv)


def apply_chiral(delta: IntegratedOperator, s: StatePolynomial) -> StatePolynomial:
    return delta(s)


def vn_grade(s: StatePolynomial) -> int:
    return s.max_deriv()


# -- truncations -----------------------------------------------------------


@dataclass(frozen=True)
class Truncation:
    """Finite set of bidegrees: weight <= max_weight, letters <= max_letters."""

    max_weight: int = 2
    max_letters: int = 6
    fermion_range: tuple = (-4, 4)

    def bidegrees(self):
        lo, hi = self.fermion_range
        for w in range(self.max_weight + 1):
            for L in range(self.max_letters + 1):
                for f in range(max(lo, -L), min(hi, L) + 1):
                    yield Bidegree(w, f, L)

    def words(self, n: int) -> list:
        return [w for bd in self.bidegrees() for w in enumerate_basis(n, bd)]


def _word_state(n, word) -> StatePolynomial:
    return StatePolynomial._raw(n, {(word, 0): 1})


@dataclass
class NilpotencyReport:
    checked: int
    violations: dict  # hbar degree -> list of words with nonzero d^2 component

    @property
    def passed(self) -> bool:
        return not any(self.violations.values())

    def violating_words(self) -> set:
        return {w for ws in self.violations.values() for w in ws}


def check_nilpotency(G: QuantumGenerator, bounds: Truncation = Truncation(), words=None, page: str = "full") -> NilpotencyReport:
    """Apply the operator twice to every truncation basis word."""
    n = G.n
    words = bounds.words(n) if words is None else words
    contractions = 1 if page == "hbar1" else None
    violations: dict = {}
    for word in words:
        s = _word_state(n, word)
        dd = G.operator(G.operator(s, contractions), contractions)
        for h in sorted(dd.hbar_degrees()):
            violations.setdefault(h, []).append(word)
    return NilpotencyReport(len(words), {h: ws for h, ws in sorted(violations.items())})


def self_ope_pole1(G: QuantumGenerator) -> StatePolynomial:
    return ope(G.density, G.density, G.convention)[1]


def check_generator_self_ope(G: QuantumGenerator) -> tuple[bool, StatePolynomial | None]:
    """Is the pole-1 coefficient of J(z)J(w) a total derivative?"""
    return is_total_derivative(self_ope_pole1(G))


@dataclass
class ChiralReport:
    convention: str
    checked: int
    delta_squared_failures: list
    commutator_failures: list
    supercommutator: bool = True

    @property
    def delta_squared_ok(self) -> bool:
        return not self.delta_squared_failures

    @property
    def commutator_ok(self) -> bool:
        return not self.commutator_failures

    @property
    def passed(self) -> bool:
        return self.delta_squared_ok and self.commutator_ok


def check_chiral_compat(
    G: QuantumGenerator,
    bounds: Truncation = Truncation(),
    conventions=(SECTION2, SECTION4),
    supercommutator: bool = True,
    words=None,
) -> dict[str, ChiralReport]:
    """delta^2 = 0 and delta d +- d delta = 0 on every truncation word, per convention."""
    n = G.n
    words = bounds.words(n) if words is None else words
    out = {}
    for conv in conventions:
        conv = get_convention(conv)
        d = G.with_convention(conv).operator
        delta = build_chiral(n, conv)
        sq, comm = [], []
        for word in words:
            s = _word_state(n, word)
            ds = delta(s)
            if delta(ds):
                sq.append(word)
            a = delta(d(s))
            bb = d(ds)
            if (a + bb) if supercommutator else (a - bb):
                comm.append(word)
        out[conv.name] = ChiralReport(conv.name, len(words), sq, comm, supercommutator)
    return out


# -- cohomology ------------------------------------------------------------


def letter_shifts(G: QuantumGenerator, page: str) -> set[int]:
    """Possible letter-count changes of the page differential.

    k contractions with a density word of length m change length by m - 2k.
    A residue from k >= 2 needs an uncontracted z-letter to Taylor expand,
    so k ranges up to m - 1 (and k = 1 always).
    """
    shifts = set()
    for w in G.density.words():
        top = 1 if page == "hbar1" else max(1, len(w) - 1)
        for k in range(1, top + 1):
            shifts.add(len(w) - 2 * k)
    return shifts


def letter_shift(G: QuantumGenerator, page: str) -> int | None:
    """The letter-count change when it is uniform, else None."""
    shifts = letter_shifts(G, page)
    return next(iter(shifts)) if len(shifts) == 1 else None


def _derivs(word) -> int:
    return sum(g.deriv for g in word)


def _word_order(word):
    return (len(word), word)


class _CellOperator:
    """Sparse images of basis words under the chosen page of the differential."""

    def __init__(self, G: QuantumGenerator, page: str):
        self.G = G
        self.page = page
        self.contractions = 1 if page == "hbar1" else None

    def __call__(self, word) -> dict:
        raw = self.G.operator.apply_word(word, self.contractions)
        # hbar := 1 on the full page; on the hbar1 page only hbar^1 survives
        out: dict = {}
        for (w, _h), v in raw.items():
            nv = out.get(w, 0) + v
            if nv:
                out[w] = nv
            else:
                out.pop(w, None)
        return out


def quantum_cohomology(
    G: QuantumGenerator,
    page: str = "hbar1",
    bounds: Truncation = Truncation(),
    weights=None,
) -> CohomologyReport:
    """Cohomology per cell of the hbar^1 page or of the full differential (hbar := 1).

    When the differential changes letter count uniformly by ``s`` the cells
    are (weight, fermion, letters) and exact.  Otherwise each (weight,
    fermion) band with letters <= max_letters forms one flagged cell.
    """
    if page not in ("hbar1", "full"):
        raise ValueError(f"unknown page {page!r}")
    n = G.n
    op = _CellOperator(G, page)
    shift = letter_shift(G, page)
    weights = range(bounds.max_weight + 1) if weights is None else weights
    lo, hi = bounds.fermion_range
    cells = []
    for w in weights:
        if shift is not None:
            for L in range(bounds.max_letters + 1):
                for f in range(max(lo, -L), min(hi, L) + 1):
                    basis = enumerate_basis(n, Bidegree(w, f, L))
                    lower = enumerate_basis(n, Bidegree(w, f - 1, L - shift)) if L - shift >= 0 else []
                    cell = cell_cohomology((w, f, L), basis, op, lower, order=_word_order)
                    cells.append(_to_states(n, cell))
        else:
            for f in range(lo, hi + 1):
                basis = [wd for L in range(bounds.max_letters + 1) for wd in enumerate_basis(n, Bidegree(w, f, L))]
                lower = [wd for L in range(bounds.max_letters + 1) for wd in enumerate_basis(n, Bidegree(w, f - 1, L))]
                cell = cell_cohomology((w, f, bounds.max_letters), basis, op, lower, order=_word_order, banded=True)
                cells.append(_to_states(n, cell))
    return CohomologyReport(
        grading=("weight", "fermion", "letters"),
        cells=cells,
        metadata={
            "page": page,
            "convention": G.convention.name,
            "letter_shift": shift,
            "max_weight": bounds.max_weight,
            "max_letters": bounds.max_letters,
            "fermion_range": list(bounds.fermion_range),
        },
    )


def _to_states(n, cell):
    cell.representatives = [StatePolynomial(n, {(w, 0): v for w, v in r.items()}) for r in cell.representatives]
    return cell


def differential_page(G: QuantumGenerator, page: str):
    """The page differential on hbar-free states, with hbar set to 1."""
    op = _CellOperator(G, page)

    def d(s: StatePolynomial) -> StatePolynomial:
        acc: dict = {}
        for (w, _h), v in s.items():
            linalg.add_scaled(acc, {(w2, 0): t for w2, t in op(w).items()}, v)
        return StatePolynomial._raw(s.n, acc)

    return d


def is_closed(G: QuantumGenerator, s: StatePolynomial, page: str = "hbar1") -> bool:
    return differential_page(G, page)(s).is_zero()


def exactness_witness(G: QuantumGenerator, s: StatePolynomial, page: str = "hbar1") -> StatePolynomial | None:
    """A preimage of ``s`` under the page differential, searched on the
    graded pieces that can map onto ``s``; None when ``s`` is not exact."""
    n = G.n
    if s.is_zero():
        return StatePolynomial.zero(n)
    op = _CellOperator(G, page)
    shifts = letter_shifts(G, page)
    target = {w: v for (w, _h), v in s.items()}
    pieces = {(word_weight(w), word_fermion(w) - 1, len(w) - t) for w in target for t in shifts}
    # a single residue keeps the total number of z-derivatives fixed
    derivs = {_derivs(w) for w in target} if page == "hbar1" else None
    cand = []
    for w, f, L in sorted(pieces):
        if L >= 0:
            cand.extend(wd for wd in enumerate_basis(n, Bidegree(w, f, L)) if derivs is None or _derivs(wd) in derivs)
    cols = [op(word) for word in cand]
    x = linalg.solve(cols, target)
    if x is None:
        return None
    return StatePolynomial(n, {(cand[i], 0): v for i, v in x.items()})


def closed_and_nonexact(G: QuantumGenerator, s: StatePolynomial, page: str = "hbar1") -> tuple[bool, bool]:
    return is_closed(G, s, page), exactness_witness(G, s, page) is None


def random_basis_words(n: int, bounds: Truncation, count: int, seed: int = 0) -> list:
    words = bounds.words(n)
    rng = random.Random(seed)
    return [rng.choice(words) for _ in range(count)]

