from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from qlich import linalg

vectors = st.lists(
    st.dictionaries(st.integers(0, 5), st.integers(-3, 3).map(Fraction), max_size=4).map(
        lambda d: {k: v for k, v in d.items() if v}
    ),
    max_size=6,
)


def dense_rank(rows, width=6):
    m = [[Fraction(r.get(j, 0)) for j in range(width)] for r in rows]
    rank, col = 0, 0
    while rank < len(m) and col < width:
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def test_rank_of_dependent_rows():
    rows = [{0: 1, 1: 2}, {0: 2, 1: 4}, {2: 1}]
    assert linalg.rank(rows) == 2


def test_kernel_relations_annihilate():
    rows = [{0: 1, 1: 2}, {0: 2, 1: 4}, {2: 1}, {0: 1, 1: 2, 2: 1}]
    ker = linalg.kernel(rows)
    assert len(ker) == 2
    for rel in ker:
        assert not linalg.combine(rel, rows)


def test_solve_and_inconsistent():
    cols = [{0: 1}, {1: 1}, {0: 1, 1: 1}]
    x = linalg.solve(cols, {0: 3, 1: -2})
    assert linalg.combine(x, cols) == {0: 3, 1: -2}
    assert linalg.solve([{0: 1}], {1: 1}) is None


@settings(max_examples=60, deadline=None)
@given(vectors)
def test_rank_nullity_against_dense_elimination(rows):
    r = linalg.rank(rows)
    assert r == dense_rank(rows)
    assert r + len(linalg.kernel(rows)) == len(rows)
