"""Exact computer algebra for linear free divisors and their tautological systems."""

from .polyring import Polynomial, PolyMatrix, VarContext, determinant, gcd, is_squarefree
from .parsing import PolynomialSyntaxError, parse_polynomial
from .weyl import (ORDER, TOTAL_ORDER, WeylContext, WeylOperator, apply, apply_to_symbolic_power,
                   fourier_laplace, normal_product, principal_symbol, transpose)
from .logfields import DivisorAnalysis, LinearField, analyze, compute_log_algebra, dualize, saito_criterion
from .groebner import MonomialOrder, buchberger, ideal_dimension, is_regular_sequence, sk_check
from .bernstein import BernsteinPolynomial, bernstein_selfdual, convert_normalization, resonance_constant
from .tautsys import SystemPresentation, fl_presentation, hat_presentation, homogenized_ideal_Is
from .reduction import (gauge_normalize, localized_fl_presentation, quantum_de_specialize,
                        reduced_presentation, restrict_through_h, transpose_identity_check)
from .spencer import LieRinehartPresentation, build_spencer, check_d_squared, graded_koszul_matrix

__version__ = "0.1.0"

__all__ = [
    "Polynomial", "PolyMatrix", "VarContext", "determinant", "gcd", "is_squarefree",
    "PolynomialSyntaxError", "parse_polynomial",
    "ORDER", "TOTAL_ORDER", "WeylContext", "WeylOperator", "apply", "apply_to_symbolic_power",
    "fourier_laplace", "normal_product", "principal_symbol", "transpose",
    "DivisorAnalysis", "LinearField", "analyze", "compute_log_algebra", "dualize", "saito_criterion",
    "MonomialOrder", "buchberger", "ideal_dimension", "is_regular_sequence", "sk_check",
    "BernsteinPolynomial", "bernstein_selfdual", "convert_normalization", "resonance_constant",
    "SystemPresentation", "fl_presentation", "hat_presentation", "homogenized_ideal_Is",
    "gauge_normalize", "localized_fl_presentation", "quantum_de_specialize", "reduced_presentation",
    "restrict_through_h", "transpose_identity_check",
    "LieRinehartPresentation", "build_spencer", "check_d_squared", "graded_koszul_matrix",
]
