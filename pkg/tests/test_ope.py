from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as hs

from qlich.field_algebra import Bidegree, StatePolynomial, b, beta, c, d_z, enumerate_basis, gamma
from qlich.ope import SECTION2, SECTION4, IntegratedOperator, bracket_action, contraction_kernel, hbar_component, ope
from conftest import st


def test_kernel_examples():
    assert contraction_kernel(b(1), c(1), SECTION2) == (1, 1)
    assert contraction_kernel(gamma(1, 1), beta(1), SECTION4) == (1, 2)
    assert contraction_kernel(gamma(1), gamma(1))[0] == 0
    assert contraction_kernel(b(1), c(2))[0] == 0
    # beta(z) gamma(w) carries the convention sign
    assert contraction_kernel(beta(1), gamma(1), SECTION2) == (-1, 1)
    assert contraction_kernel(beta(1), gamma(1), SECTION4) == (1, 1)


def test_ope_examples():
    e = ope(st("g1^2"), st("B1"))
    assert e[1] == st("2*h*g1") and e.max_pole() == 1
    assert ope(st("c1"), st("c2")).is_empty()
    e = ope(st("c1*B2"), st("b1*g2"))
    # single contractions (c1,b1) and (B2,g2) at pole 1, the double one at pole 2
    assert e[1] == st("h*b1*c1 + h*B2*g2")
    assert e[2] == st("-h^2")
    assert e.max_pole() == 2


def test_bracket_action_examples():
    delta = IntegratedOperator(st("D1 g1*c1 + D1 g2*c2"))
    assert delta(st("b1")) == st("h*D1 g1")
    assert delta(st("1")).is_zero()
    J = st("c1*B2 - B1*c2")
    for conv in (SECTION2, SECTION4):
        expected = st("h*c2").scale(-conv.beta_gamma)
        assert bracket_action(J, st("g1"), conv) == expected


def test_hbar_component():
    s = st("h*c1 + h^2*g1")
    assert hbar_component(s, 1) == st("c1")
    assert hbar_component(s, 2) == st("g1")
    assert hbar_component(StatePolynomial.zero(2), 3).is_zero()


def test_hbar_degree_counts_contractions():
    e = ope(st("c1*B2*g1"), st("b1*g2*B1"))
    for k, v in e.poles.items():
        for (word, h), _ in v.items():
            assert 1 <= h <= 3


words_w1 = [w for L in range(1, 4) for f in (-1, 0, 1) for w in enumerate_basis(2, Bidegree(1, f, L))]
words_w0 = [w for L in range(0, 4) for f in (-1, 0, 1, 2) for w in enumerate_basis(2, Bidegree(0, f, L))]


def as_state(word, coeff=1):
    return StatePolynomial._raw(2, {(word, 0): Fraction(coeff)})


@settings(max_examples=60, deadline=None)
@given(hs.sampled_from(words_w0), hs.sampled_from(words_w1 + words_w0))
def test_total_derivative_density_acts_as_zero(a, s):
    assert bracket_action(d_z(as_state(a)), as_state(s)).is_zero()


@settings(max_examples=60, deadline=None)
@given(hs.sampled_from(words_w1), hs.sampled_from(words_w0), hs.sampled_from(words_w0))
def test_linearity(J, s1, s2):
    lhs = bracket_action(as_state(J), as_state(s1) + as_state(s2, 3))
    rhs = bracket_action(as_state(J), as_state(s1)) + bracket_action(as_state(J), as_state(s2)).scale(3)
    assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(hs.sampled_from(words_w1), hs.sampled_from(words_w1))
def test_max_pole_bound(a, x):
    e = ope(as_state(a), as_state(x))
    weight = sum(g.weight for g in a) + sum(g.weight for g in x)
    letters = min(len(a), len(x))
    assert e.max_pole() <= weight + letters
