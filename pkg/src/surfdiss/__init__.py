"""Dissections of punctured marked surfaces, their flips and exchange graphs."""

from __future__ import annotations

from .algebra import QuiverPresentation, skew_tiling_presentation, tiling_presentation, validate_skew_gentle
from .arc_engine import (
    CutResult,
    IdealArc,
    TaggedArc,
    arc_literal,
    base_arcs,
    compatible,
    cut,
    intersection_number,
    normalize,
    relative_rotation,
    tagged_rotation,
)
from .dissections import (
    ConnectivityReport,
    Dissection,
    ExchangeGraph,
    Limits,
    check_connected,
    connects_to_boundary,
    enumerate_dissections,
    exchange_graph,
    flip,
    flip_sign,
    index_vector,
    is_costandard,
    is_dissection,
    is_standard,
    make_dissection,
    mutation_direction,
    path_to_support,
    tau_tilting_label,
)
from .errors import (
    AxiomViolation,
    BoundaryParallel,
    ConfigError,
    CrossCheckMismatch,
    DegenerateAfterCut,
    DegenerateSurface,
    DoesNotShear,
    FoldedClosureViolated,
    IllegalMonogonCutout,
    IncompatibleArc,
    InternalInconsistency,
    InvalidArc,
    LimitExceeded,
    NoBoundary,
    NotAdmissible,
    NotStandard,
    NullHomotopic,
    SelfIntersecting,
    SurfdissError,
)
from .shear import ShearVector, co_elementary_laminate, elementary_laminate, shear_vector, shears
from .surface_model import (
    PartialTaggedTriangulation,
    SurfaceModel,
    SurfaceSpec,
    build_surface,
    ideal_form,
    partial_triangulation,
    tagged_form,
)

__version__ = "0.1.0"

__all__ = [
    "AxiomViolation",
    "BoundaryParallel",
    "ConfigError",
    "ConnectivityReport",
    "CrossCheckMismatch",
    "CutResult",
    "DegenerateAfterCut",
    "DegenerateSurface",
    "Dissection",
    "DoesNotShear",
    "ExchangeGraph",
    "FoldedClosureViolated",
    "IdealArc",
    "IllegalMonogonCutout",
    "IncompatibleArc",
    "InternalInconsistency",
    "InvalidArc",
    "LimitExceeded",
    "Limits",
    "NoBoundary",
    "NotAdmissible",
    "NotStandard",
    "NullHomotopic",
    "PartialTaggedTriangulation",
    "QuiverPresentation",
    "SelfIntersecting",
    "ShearVector",
    "SurfaceModel",
    "SurfaceSpec",
    "SurfdissError",
    "TaggedArc",
    "arc_literal",
    "base_arcs",
    "build_surface",
    "check_connected",
    "co_elementary_laminate",
    "compatible",
    "connects_to_boundary",
    "cut",
    "elementary_laminate",
    "enumerate_dissections",
    "exchange_graph",
    "flip",
    "flip_sign",
    "ideal_form",
    "index_vector",
    "intersection_number",
    "is_costandard",
    "is_dissection",
    "is_standard",
    "make_dissection",
    "mutation_direction",
    "normalize",
    "partial_triangulation",
    "path_to_support",
    "relative_rotation",
    "shear_vector",
    "shears",
    "skew_tiling_presentation",
    "tagged_form",
    "tagged_rotation",
    "tau_tilting_label",
    "tiling_presentation",
    "validate_skew_gentle",
]
