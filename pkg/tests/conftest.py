import pytest

from qlich.poisson import PoissonTensor
from qlich.render import parse_poly, parse_state


def tensor2(expr: str) -> PoissonTensor:
    return PoissonTensor(2, {(1, 2): parse_poly(expr, 2)})


QUADRATIC = {"P1": "1", "P2": "x1*x2", "P3": "x1^2 + x2^2", "P4": "x2^2"}


def st(text: str, n: int = 2):
    return parse_state(text, n)


@pytest.fixture
def planar():
    return {name: tensor2(expr) for name, expr in QUADRATIC.items()}
