"""Brute-force ``GL_n`` zip data over small finite fields."""

from . import kernels
from .field import FieldError, FiniteField
from .frames import (
    FrameData,
    Labeling,
    NoFrameFound,
    StabilizerReport,
    datum_of,
    find_frame,
    find_frames,
    frame_axioms,
    match_representatives,
    stabilizer_growth,
    stabilizer_points,
)
from .instance import FiniteZipInstance, InvalidShape, build_instance, weyl_matrix
from .invariants import signature
from .lang import LangReport, fixed_points, lang_fiber_check, lang_map
from .matrices import ENUMERATION_CAP, MatrixAlgebra, TooLarge, gl_order
from .orbits import (
    DIMENSION_TOLERANCE,
    DimensionEstimate,
    NonStabilized,
    OrbitTable,
    OrbitTower,
    TowerTooShort,
    dimension_estimate,
    geometric_orbit_count,
    orbit_tower,
    zip_orbits,
)
from .sections import (
    BruhatCell,
    KernelReport,
    NotInIntersection,
    SectionReport,
    bruhat_cells,
    e_x_map,
    f_x_section,
    kernel_check,
    section_check,
)

__all__ = [
    "kernels",
    "FieldError", "FiniteField",
    "FrameData", "Labeling", "NoFrameFound", "StabilizerReport", "datum_of", "find_frame",
    "find_frames", "frame_axioms", "match_representatives", "stabilizer_growth", "stabilizer_points",
    "FiniteZipInstance", "InvalidShape", "build_instance", "weyl_matrix",
    "signature",
    "LangReport", "fixed_points", "lang_fiber_check", "lang_map",
    "ENUMERATION_CAP", "MatrixAlgebra", "TooLarge", "gl_order",
    "DIMENSION_TOLERANCE", "DimensionEstimate", "NonStabilized", "OrbitTable", "OrbitTower",
    "TowerTooShort", "dimension_estimate", "geometric_orbit_count", "orbit_tower", "zip_orbits",
    "BruhatCell", "KernelReport", "NotInIntersection", "SectionReport", "bruhat_cells", "e_x_map",
    "f_x_section", "kernel_check", "section_check",
]
