"""Arbitrary-precision scalar, polynomial and linear-algebra kernel."""

from .linalg import (Determinant, EigenEstimate, SingularMatrixError, determinant, lu_factor,
                     lu_solve, min_abs_eigenvalue, solve)
from .poly import (Polynomial, exact_gcd, poly_derivative, poly_divmod, poly_eval,
                   poly_gcd_coprime_check, squarefree_decomposition)
from .precision import PrecisionContext, PrecisionError, default_context
from .ratfun import RationalPoly
from .roots import RootFindingError, poly_roots
from .scalars import GaussRational, fmt_complex, fmt_real, parse_exact, to_exact, to_mpc

__all__ = [
    "Determinant", "EigenEstimate", "GaussRational", "Polynomial", "PrecisionContext",
    "PrecisionError", "RationalPoly", "RootFindingError", "SingularMatrixError",
    "default_context", "determinant", "exact_gcd", "fmt_complex", "fmt_real", "lu_factor",
    "lu_solve", "min_abs_eigenvalue", "parse_exact", "poly_derivative", "poly_divmod",
    "poly_eval", "poly_gcd_coprime_check", "poly_roots", "solve", "squarefree_decomposition",
    "to_exact", "to_mpc",
]
