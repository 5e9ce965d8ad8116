"""Contour systems for semiclassical functionals and quadrature along them."""

from .functional import (WeightedContourSet, apply_functional, build_contours, freud_homology,
                         moments, per_contour_moments)
from .geometry import (CIRCLE, DUAL_RAY, HARD_EDGE_SEGMENT, LASSO, PETAL_LOOP, SECTOR_ARC,
                       STEM_LIKE, Arc, Contour, ContourSystem, Radial, build_system,
                       freud_center, intersection_number, pairing_matrix,
                       polyline_distance, type_scale)
from .quadrature import (Integrand, PoleOnPathError, QuadratureError, QuadratureReport,
                         gauss_legendre, integrate_weighted, theta_at_anchor)

__all__ = [
    "Arc", "CIRCLE", "Contour", "ContourSystem", "DUAL_RAY", "HARD_EDGE_SEGMENT", "Integrand",
    "LASSO", "PETAL_LOOP", "PoleOnPathError", "QuadratureError", "QuadratureReport", "Radial",
    "SECTOR_ARC", "STEM_LIKE", "WeightedContourSet", "apply_functional", "build_contours",
    "build_system", "freud_center", "freud_homology", "gauss_legendre", "integrate_weighted",
    "intersection_number", "moments", "pairing_matrix", "per_contour_moments", "polyline_distance",
    "theta_at_anchor", "type_scale",
]
