"""Null structures, Weyl filtrations and Goldberg-Sachs linear systems."""
from .chart import ChartMetric, curvature_at, jet_at
from .classify import FrameTensor, degeneracy_conditions, filtration_level, symmetry_project
from .config import DEFAULT_TOL, Tolerances
from .frame import connection_coeffs, frame_point, involutivity_check, validate_frame
from .poly import Poly
from .systems import assemble_system, det_split_check, solve_trivial
from .verdict import cotton_york_alt, gs_verdict, tensor_verdict

__all__ = [
    "ChartMetric", "curvature_at", "jet_at", "FrameTensor", "degeneracy_conditions", "filtration_level",
    "symmetry_project", "DEFAULT_TOL", "Tolerances", "connection_coeffs", "frame_point",
    "involutivity_check", "validate_frame", "Poly", "assemble_system", "det_split_check", "solve_trivial",
    "cotton_york_alt", "gs_verdict", "tensor_verdict",
]
