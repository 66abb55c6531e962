"""Discrete centroaffine indefinite surfaces on rectangular Z^2 lattice windows."""

from .analysis import (
    AnalysisReport,
    Convexity,
    analyze,
    convexity_at,
    eigen_scalar,
    harmonic_check,
    harmonic_constant_check,
    laplacian,
    star_volumes,
)
from .compat import (
    CompatResiduals,
    TzitzeicaData,
    check_field,
    constant_family,
    is_affine_sphere,
    is_constant_compatible,
    matrix_residual,
    scalar_residuals,
    tzitzeica_field,
    tzitzeica_grid,
)
from .errors import (
    AssumptionViolated,
    CalatError,
    IncompatibleField,
    InvalidWindow,
    MissingStencil,
    SingularTransition,
    ZeroDenominator,
)
from .invariants import CoefficientField, CoefficientSet, extract_field, extract_set
from .lattice import Frame, LatticeWindow, Point3, det3, point, validate_window
from .mesh import faces, to_obj, to_off
from .scalar import Backend, set_tolerance, tolerance
from .synthesis import EXAMPLES, example_set, generate_example, propagate_frame, synthesize, transition_matrices

__all__ = [
    "AnalysisReport",
    "AssumptionViolated",
    "Backend",
    "CalatError",
    "CoefficientField",
    "CoefficientSet",
    "CompatResiduals",
    "Convexity",
    "EXAMPLES",
    "Frame",
    "IncompatibleField",
    "InvalidWindow",
    "LatticeWindow",
    "MissingStencil",
    "Point3",
    "SingularTransition",
    "TzitzeicaData",
    "ZeroDenominator",
    "analyze",
    "check_field",
    "constant_family",
    "convexity_at",
    "det3",
    "eigen_scalar",
    "example_set",
    "extract_field",
    "extract_set",
    "faces",
    "generate_example",
    "harmonic_check",
    "harmonic_constant_check",
    "is_affine_sphere",
    "is_constant_compatible",
    "laplacian",
    "matrix_residual",
    "point",
    "propagate_frame",
    "scalar_residuals",
    "set_tolerance",
    "star_volumes",
    "synthesize",
    "to_obj",
    "to_off",
    "tolerance",
    "transition_matrices",
    "tzitzeica_field",
    "tzitzeica_grid",
    "validate_window",
]
