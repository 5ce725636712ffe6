"""Exact computation on single-vertex higher-rank graphs and their C*-algebras."""

from .algebra import (
    Element,
    adjoint,
    canonicalize,
    identity,
    kms_check,
    limits,
    modular_action,
    multiply,
    omega,
    spectral_component,
)
from .alignment import check_little_pullback, check_singly_aligned, is_lpb
from .averaging import (
    AveragingUnitarySpec,
    CuntzTuple,
    alpha_brute,
    alpha_closed,
    averaging_unitary,
    build_intrinsic_unitary,
    gamma_endo,
)
from .census import enumerate_census
from .dixmier import dixmier_average, replay, shrink_offdiagonal
from .errors import (
    BudgetError,
    CapError,
    CubicViolationError,
    DegreeError,
    DomainError,
    GraphMismatchError,
    KGraphError,
    ModeError,
    ResourceError,
    ShapeError,
    StructureError,
    UnsupportedError,
)
from .graph import KGraph, cubic_violations, validate_kgraph
from .iso import canonical_iso_form, orbit_classes, relabel
from .lattice import classify_type, intrinsic_group, spectrum_generator
from .matrix_model import matrix_model
from .norms import norm_bounds
from .periodicity import check_periodicity

__version__ = "0.1.0"

__all__ = [
    "AveragingUnitarySpec",
    "BudgetError",
    "CapError",
    "CubicViolationError",
    "CuntzTuple",
    "DegreeError",
    "DomainError",
    "Element",
    "GraphMismatchError",
    "KGraph",
    "KGraphError",
    "ModeError",
    "ResourceError",
    "ShapeError",
    "StructureError",
    "UnsupportedError",
    "adjoint",
    "alpha_brute",
    "alpha_closed",
    "averaging_unitary",
    "build_intrinsic_unitary",
    "canonical_iso_form",
    "canonicalize",
    "check_little_pullback",
    "check_periodicity",
    "check_singly_aligned",
    "classify_type",
    "cubic_violations",
    "dixmier_average",
    "enumerate_census",
    "gamma_endo",
    "identity",
    "intrinsic_group",
    "is_lpb",
    "kms_check",
    "limits",
    "matrix_model",
    "modular_action",
    "multiply",
    "norm_bounds",
    "omega",
    "orbit_classes",
    "relabel",
    "replay",
    "shrink_offdiagonal",
    "spectral_component",
    "spectrum_generator",
    "validate_kgraph",
]
