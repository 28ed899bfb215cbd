import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs

from qlich.poisson import (
    JacobiFailure,
    Multivector,
    PoissonTensor,
    jacobi_check,
    lichnerowicz_d,
    lp_cohomology,
    multivector_basis,
    schouten,
)
from qlich.poly import Poly
from qlich.render import parse_poly
from conftest import tensor2


def t3(**entries):
    return PoissonTensor(3, {tuple(int(ch) for ch in k[1:]): parse_poly(v, 3) for k, v in entries.items()})


SO3 = t3(P12="x3", P23="x1", P13="-x2")
SUITE = [
    (tensor2("x1*x2"), True),
    (SO3, True),
    (t3(P12="x3", P13="x3"), True),  # decomposable: x3 d1 ^ (d2 + d3)
    (t3(P12="1", P23="x2"), False),
    (t3(P12="x1", P13="-x3", P23="x2"), False),
    (t3(P12="x1*x2", P23="x3^2"), False),
    (t3(P12="x3^2", P13="x2*x3", P23="x1"), None),
    (PoissonTensor(4, {(1, 2): Poly.constant(4), (3, 4): Poly.constant(4)}), True),
]


def random_multivector(rng, n, k, max_deg=2):
    comps = {}
    for idx, e in [key for d in range(max_deg + 1) for key in multivector_basis(n, k, d)]:
        if rng.random() < 0.3:
            comps.setdefault(idx, Poly(n))
            comps[idx] = comps[idx] + Poly(n, {e: rng.randint(-2, 2)})
    return Multivector.from_components(n, comps)


@pytest.mark.parametrize("P, expected", SUITE)
def test_jacobi_agrees_with_schouten(P, expected):
    ok, res = jacobi_check(P)
    A = P.as_multivector()
    assert ok == schouten(A, A).is_zero()
    if expected is not None:
        assert ok == expected
    assert ok == res.is_zero()


def test_schouten_examples():
    d1 = Multivector.basis_field(3, 1)
    x1 = Multivector.function(parse_poly("x1", 3))
    assert schouten(d1, x1) == Multivector.function(Poly.constant(3))
    A = tensor2("x1*x2").as_multivector()
    assert schouten(A, A).is_zero()


def test_lichnerowicz_examples():
    P = tensor2("x1*x2")
    dx = lichnerowicz_d(P, Multivector.function(parse_poly("x1", 2)))
    assert dx == Multivector.from_components(2, {(2,): parse_poly("x1*x2", 2)})
    assert lichnerowicz_d(P, Multivector.function(Poly.constant(2))).is_zero()


@settings(max_examples=30, deadline=None)
@given(hs.integers(0, 10_000), hs.integers(0, 3), hs.integers(0, 3))
def test_schouten_graded_antisymmetry(seed, p, q):
    rng = random.Random(seed)
    A, B = random_multivector(rng, 3, p), random_multivector(rng, 3, q)
    assert schouten(A, B) == schouten(B, A).scale(-((-1) ** ((p - 1) * (q - 1))))


@settings(max_examples=20, deadline=None)
@given(hs.integers(0, 10_000), hs.integers(0, 2))
def test_d_squared_zero(seed, k):
    rng = random.Random(seed)
    for P in (tensor2("x1*x2"), SO3):
        A = random_multivector(rng, P.n, k)
        assert lichnerowicz_d(P, lichnerowicz_d(P, A)).is_zero()


def test_lp_cohomology_p2():
    rep = lp_cohomology(tensor2("x1*x2"), 6)
    assert rep.total_dims(0) == {0: 1, 1: 2, 2: 2}
    reps = {str(r) for r in rep.representatives()}
    expected = {
        Multivector.function(Poly.constant(2)),
        Multivector.from_components(2, {(1,): parse_poly("x1", 2)}),
        Multivector.from_components(2, {(2,): parse_poly("x2", 2)}),
        Multivector.basis_field(2, 1, 2),
        Multivector.from_components(2, {(1, 2): parse_poly("x1*x2", 2)}),
    }
    assert reps == {str(r) for r in expected}
    for cell in rep.cells:
        assert cell.dim == cell.kernel_dim - cell.image_dim


def test_lp_cohomology_symplectic_and_zero():
    assert lp_cohomology(tensor2("1"), 5).total_dims(0) == {0: 1, 1: 0, 2: 0}
    zero = lp_cohomology(PoissonTensor(2, {}), 2)
    # zero differential: everything is cohomology; 6 coefficients per band of degree <= 2
    assert zero.total_dims(0) == {0: 6, 1: 12, 2: 6}


def test_lp_cohomology_rejects_non_poisson():
    with pytest.raises(JacobiFailure):
        lp_cohomology(t3(P12="1", P23="x2"), 2)


def test_nonhomogeneous_band_is_flagged():
    rep = lp_cohomology(tensor2("1 + x1*x2"), 3)
    assert rep.truncated
