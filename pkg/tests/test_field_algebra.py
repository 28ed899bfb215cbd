from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs

from qlich.field_algebra import (
    Bidegree,
    DimensionMismatch,
    Generator,
    Kind,
    StatePolynomial,
    b,
    beta,
    c,
    d_z,
    enumerate_basis,
    gamma,
    is_total_derivative,
    multiply,
    normalize,
    normalize_word,
)
from conftest import st


def letter(n=2, max_deriv=2):
    return hs.builds(Generator, hs.sampled_from(list(Kind)), hs.integers(1, n), hs.integers(0, max_deriv))


def state(n=2):
    mono = hs.tuples(hs.lists(letter(n), max_size=3), hs.integers(-3, 3), hs.integers(0, 1))
    return hs.lists(mono, max_size=3).map(
        lambda ms: sum((StatePolynomial.from_letters(n, w, k, h) for w, k, h in ms), StatePolynomial.zero(n))
    )


def parity_part(s, p):
    return StatePolynomial(s.n, {k: v for k, v in s.items() if sum(g.odd for g in k[0]) % 2 == p})


def test_generator_gradings():
    assert b(1).weight == 1 and beta(1, 2).weight == 3 and c(1, 1).weight == 1 and gamma(2).weight == 0
    assert c(1).fermion == 1 and b(1).fermion == -1 and gamma(1).fermion == 0
    assert b(1).odd and c(1).odd and not beta(1).odd and not gamma(1).odd


def test_normalize_examples():
    m = normalize([c(2), c(1)])
    assert m.word == (c(1), c(2)) and m.coeff == -1
    assert normalize([c(1), c(1)]).coeff == 0
    m = normalize([gamma(2), gamma(1)])
    assert m.word == (gamma(1), gamma(2)) and m.coeff == 1


def test_multiply_examples():
    assert st("c1") * st("c2") == st("c1*c2")
    assert st("c2") * st("c1") == -st("c1*c2")
    assert st("g1") * st("g1") == st("g1^2")
    # c1 c2 b1 -> b1 c1 c2 takes two odd transpositions
    assert (st("c1*c2") * st("b1")).coefficient([b(1), c(1), c(2)]) == 1


def test_d_z_examples():
    assert d_z(st("g1")) == st("D1 g1")
    assert d_z(st("c1*c2")) == st("D1 c1*c2 + c1*D1 c2")
    assert d_z(st("1")).is_zero()


def test_enumerate_basis_examples():
    assert enumerate_basis(2, Bidegree(0, 1, 1)) == [(c(1),), (c(2),)]
    assert enumerate_basis(2, Bidegree(0, 2, 2)) == [(c(1), c(2))]
    assert enumerate_basis(1, Bidegree(1, -1, 1)) == [(b(1),)]


def test_total_derivative_examples():
    ok, w = is_total_derivative(st("D1 g1"))
    assert ok and w == st("g1")
    ok, w = is_total_derivative(st("g1*D1 g1"))
    assert ok and w == st("g1^2") * Fraction(1, 2)
    assert is_total_derivative(st("c1*D1 c1"))[0] is False


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        StatePolynomial.from_letters(1, [c(2)])
    with pytest.raises(DimensionMismatch):
        st("c1", 2) + st("c1", 1)


@settings(max_examples=80, deadline=None)
@given(hs.lists(letter(), max_size=5))
def test_normalize_idempotent(word):
    s1, w1 = normalize_word(word)
    s2, w2 = normalize_word(w1)
    assert w2 == w1 and (s1 == 0 or s2 == 1)


@settings(max_examples=60, deadline=None)
@given(state(), state(), state())
def test_product_associative_and_distributive(a, x, y):
    assert (a * x) * y == a * (x * y)
    assert a * (x + y) == a * x + a * y


@settings(max_examples=60, deadline=None)
@given(state(), state(), hs.integers(0, 1), hs.integers(0, 1))
def test_supercommutativity(a, x, p, q):
    a, x = parity_part(a, p), parity_part(x, q)
    assert multiply(a, x) == multiply(x, a).scale((-1) ** (p * q))


@settings(max_examples=60, deadline=None)
@given(state(), state())
def test_d_z_leibniz(a, x):
    assert d_z(a * x) == d_z(a) * x + a * d_z(x)


def brute_force_basis(n, bd):
    gens = [Generator(k, i, d) for k in Kind for i in range(1, n + 1) for d in range(bd.weight + 1)]
    gens = [g for g in gens if g.weight <= bd.weight]
    out = set()
    for word in product(gens, repeat=bd.letters):
        sign, w = normalize_word(word)
        if sign and sum(g.weight for g in w) == bd.weight and sum(g.fermion for g in w) == bd.fermion:
            out.add(w)
    return out


@pytest.mark.parametrize("bd", [Bidegree(0, 1, 3), Bidegree(1, 0, 2), Bidegree(2, -1, 3), Bidegree(2, 1, 3), Bidegree(3, 0, 2)])
def test_enumerate_basis_matches_brute_force(bd):
    words = enumerate_basis(2, bd)
    assert len(words) == len(set(words))
    assert all(normalize_word(w) == (1, w) for w in words)
    assert set(words) == brute_force_basis(2, bd)


@settings(max_examples=40, deadline=None)
@given(hs.lists(hs.tuples(hs.sampled_from(enumerate_basis(2, Bidegree(2, 0, 2))), hs.integers(-2, 2)), min_size=1, max_size=3))
def test_total_derivative_brute_force(terms):
    from qlich import linalg

    s = sum((StatePolynomial._raw(2, {(w, 0): Fraction(v)}) for w, v in terms if v), StatePolynomial.zero(2))
    s = StatePolynomial(2, dict(s.items()))
    ok, witness = is_total_derivative(s)
    cand = [w for L in range(0, 4) for f in range(-2, 3) for w in enumerate_basis(2, Bidegree(1, f, L))]
    cols = [d_z(StatePolynomial._raw(2, {(w, 0): Fraction(1)})).as_vector() for w in cand]
    solvable = linalg.solve(cols, s.as_vector()) is not None
    if s.is_zero():
        return
    assert ok == solvable
    if ok:
        assert d_z(witness) == s
