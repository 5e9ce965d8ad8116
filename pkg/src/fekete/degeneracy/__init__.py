"""Hankel diagnostics, weight recovery and the verifiers for degenerate polynomials."""

from .caustic import CausticResult, caustic_weights
from .hankel import (HankelSlice, SingularHankelError, determinant_form_scale, hankel_det,
                     hankel_slice, min_abs_eigenvalue, orthopoly_determinant_form,
                     orthopoly_from_moments, square_hankel)
from .remainder import (BASEPOINT, CAUCHY_SUM, ContourProximityError, RemainderFn,
                        basepoint_integral, cauchy_sum, default_sample_points, dual_weights,
                        remainder_fn, wronskian, wronskian_check)
from .report import (SKIPPED, DegeneracyReport, heine_stieltjes_Q, orthogonality_residuals,
                     verify_degeneracy)
from .weights import (WeightRecoveryError, freud_real_imag_basis, normalize_weights,
                      raw_weights, weighted_set_from_config, weights_from_config)

__all__ = [
    "BASEPOINT", "CAUCHY_SUM", "CausticResult", "ContourProximityError", "DegeneracyReport",
    "HankelSlice", "RemainderFn", "SKIPPED", "SingularHankelError", "WeightRecoveryError",
    "basepoint_integral", "cauchy_sum", "caustic_weights", "default_sample_points",
    "determinant_form_scale", "dual_weights", "freud_real_imag_basis", "hankel_det",
    "hankel_slice", "heine_stieltjes_Q", "min_abs_eigenvalue", "normalize_weights",
    "orthogonality_residuals", "orthopoly_determinant_form", "orthopoly_from_moments",
    "raw_weights", "remainder_fn", "square_hankel", "verify_degeneracy",
    "weighted_set_from_config", "weights_from_config", "wronskian", "wronskian_check",
]
