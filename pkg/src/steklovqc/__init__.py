"""Geometric factors and Steklov eigenvalue bounds for planar starlike domains."""
from .bounds import (BoundReport, ConcaveFunctional, comparison_report, functional_bound, hps_bounds, rho,
                     rho_max, theorem_sum_bound)
from .factors import (GeometricFactors, MobiusResult, dilatation_coeffs, ellipse_factors, g0_starlike,
                      g1_starlike, g_factor, gamma, gamma1, hippopede_factors, mobius_optimize,
                      mobius_pushforward, optimize_origin, polygon_factors)
from .geometry import (AngularDilatation, BoundaryWeight, StarlikeDomain, conformal_weight, make_disk,
                       make_ellipse, make_hippopede, make_polygon, starlike_dilatation, weighted_perimeter)
from .spectrum import SteklovSpectrum, assemble, solve, steklov_eigenvalues

__all__ = [
    "AngularDilatation", "BoundReport", "BoundaryWeight", "ConcaveFunctional", "GeometricFactors",
    "MobiusResult", "StarlikeDomain", "SteklovSpectrum", "assemble", "comparison_report",
    "conformal_weight", "dilatation_coeffs", "ellipse_factors", "functional_bound", "g0_starlike",
    "g1_starlike", "g_factor", "gamma", "gamma1", "hippopede_factors", "hps_bounds", "make_disk",
    "make_ellipse", "make_hippopede", "make_polygon", "mobius_optimize", "mobius_pushforward",
    "optimize_origin", "polygon_factors", "rho", "rho_max", "solve", "starlike_dilatation",
    "steklov_eigenvalues", "theorem_sum_bound", "weighted_perimeter",
]
