"""Numerical laboratory for Schwarz-Pick type inequalities and their matrix
(contraction) counterparts."""

from .calculus import (
    apply_to_triangular,
    divided_differences,
    matrix_function,
    poly_eval_tuple,
    von_neumann_check,
)
from .completion import (
    block_criterion_3x3,
    criterion_3x3,
    criterion_from_matrix,
    douglas_minimal,
    parrott_complete,
    parrott_extract,
)
from .disk import hyperbolic_distance, pseudo_hyperbolic_distance, s_product
from . import errors
from .inequalities import (
    beardon_minda,
    bm_matrix_bridge,
    bm_proof_identity_check,
    coefficient_inequalities,
    peschl,
    peschl_multi,
    peschl_multi_inequality,
    polydisk_derivative,
    polydisk_schwarz_pick,
    ruscheweyh,
    schwarz_pick_derivative,
    schwarz_pick_two_point,
    yamashita,
)
from .linalg import is_contraction, operator_norm, singular_values, svd
from .model import model_matrix, t3_confluent, tm_basis_eval
from .multi import MultiPolynomial, SeparableBlaschke
from .report import InequalityReport
from .schur import FiniteBlaschke, Polynomial, hyperbolic_divided_difference
from .suites import SUITES, SuiteConfig, SuiteSummary, run_suite
from .sylvester import (
    SylvesterProblem,
    operator_beardon_minda,
    operator_schwarz_pick,
    solve_sylvester,
    solve_sylvester_contour,
)

__version__ = "0.1.0"

__all__ = [
    "FiniteBlaschke",
    "InequalityReport",
    "MultiPolynomial",
    "Polynomial",
    "SUITES",
    "SeparableBlaschke",
    "SuiteConfig",
    "SuiteSummary",
    "SylvesterProblem",
    "__version__",
    "apply_to_triangular",
    "beardon_minda",
    "block_criterion_3x3",
    "bm_matrix_bridge",
    "bm_proof_identity_check",
    "coefficient_inequalities",
    "criterion_3x3",
    "criterion_from_matrix",
    "divided_differences",
    "errors",
    "douglas_minimal",
    "hyperbolic_distance",
    "hyperbolic_divided_difference",
    "is_contraction",
    "matrix_function",
    "model_matrix",
    "operator_beardon_minda",
    "operator_norm",
    "operator_schwarz_pick",
    "parrott_complete",
    "parrott_extract",
    "peschl",
    "peschl_multi",
    "peschl_multi_inequality",
    "poly_eval_tuple",
    "polydisk_derivative",
    "polydisk_schwarz_pick",
    "pseudo_hyperbolic_distance",
    "run_suite",
    "ruscheweyh",
    "s_product",
    "schwarz_pick_derivative",
    "schwarz_pick_two_point",
    "singular_values",
    "solve_sylvester",
    "solve_sylvester_contour",
    "svd",
    "t3_confluent",
    "tm_basis_eval",
    "von_neumann_check",
    "yamashita",
]
