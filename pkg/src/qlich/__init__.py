"""Exact symbolic tools for Poisson, quantum Lichnerowicz and Nambu structures.

States live in the bc-beta-gamma free field algebra; OPEs are computed by
Wick contraction; cohomology is computed cell by cell over the rationals.
"""

from .field_algebra import (
    Bidegree,
    DimensionMismatch,
    Generator,
    Kind,
    Monomial,
    NotHomogeneous,
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
)
from .nambu import (
    BracketResidual,
    NambuTensor,
    even_order_bridge,
    filippov_check,
    fix_argument,
    jacobian_bracket,
    leibniz_check,
    takhtajan_check,
    tensor_bracket,
)
from .ope import SECTION2, SECTION4, IntegratedOperator, OpeConvention, OpeExpansion, bracket_action, ope
from .poisson import (
    JacobiFailure,
    Multivector,
    PoissonTensor,
    jacobi_check,
    lichnerowicz_d,
    lp_cohomology,
    schouten,
    to_state,
)
from .poly import Poly
from .quantum import (
    QuantumGenerator,
    Truncation,
    apply_chiral,
    apply_dqL,
    apply_hbar1,
    build_chiral,
    build_generator,
    check_chiral_compat,
    check_generator_self_ope,
    check_nilpotency,
    closed_and_nonexact,
    quantum_cohomology,
)
from .render import ParseError, parse_poly, parse_state, render_poly, render_state

__version__ = "0.1.0"

__all__ = [
    "Bidegree",
    "DimensionMismatch",
    "Generator",
    "Kind",
    "Monomial",
    "NotHomogeneous",
    "StatePolynomial",
    "b",
    "beta",
    "c",
    "d_z",
    "enumerate_basis",
    "gamma",
    "is_total_derivative",
    "multiply",
    "normalize",
    "BracketResidual",
    "NambuTensor",
    "even_order_bridge",
    "filippov_check",
    "fix_argument",
    "jacobian_bracket",
    "leibniz_check",
    "takhtajan_check",
    "tensor_bracket",
    "SECTION2",
    "SECTION4",
    "IntegratedOperator",
    "OpeConvention",
    "OpeExpansion",
    "bracket_action",
    "ope",
    "JacobiFailure",
    "Multivector",
    "PoissonTensor",
    "jacobi_check",
    "lichnerowicz_d",
    "lp_cohomology",
    "schouten",
    "to_state",
    "Poly",
    "QuantumGenerator",
    "Truncation",
    "apply_chiral",
    "apply_dqL",
    "apply_hbar1",
    "build_chiral",
    "build_generator",
    "check_chiral_compat",
    "check_generator_self_ope",
    "check_nilpotency",
    "closed_and_nonexact",
    "quantum_cohomology",
    "ParseError",
    "parse_poly",
    "parse_state",
    "render_poly",
    "render_state",
]
