"""Monohedral hexagonal tilings of flat tori.

Constructs the minimal side-to-side tilings of a flat torus by congruent
hexagons, validates arbitrary candidate tilings, enumerates their coverings
through Hermite-normal-form sublattices, samples the moduli regions of the
constructions, and renders conformal pictures in the plane and in R3.
"""

from .construct import (
    B_POINT,
    FreeVector,
    G_POINT,
    G_PRIME,
    GenericityWarning,
    ModuliViolation,
    OMEGA3,
    PlanarPatch,
    R_POINT,
    TorusTiling,
    central_minimal,
    planar_patch,
    strip_tiling,
    type_i_minimal,
    type_ii_minimal,
    type_iii_minimal,
)
from .covering import MINIMAL_TILE_COUNT, build_cover, enumerate_coverings, is_minimal
from .embed import (
    AccuracyError,
    CurveParams,
    HopfEmbedding,
    IncompatibilityError,
    Mesh3,
    OMEGA3_CURVE,
    PoleError,
    RectEmbedding,
    conformality,
    curve_invariants,
    drape_tiling,
    hopf_torus_mesh,
    rect_embed,
    rect_torus_mesh,
)
from .geom import (
    Congruence,
    DegenerateError,
    Isometry,
    MERGE_TOL,
    Polygon,
    congruent,
    corner_angle,
    is_simple,
    signed_area,
)
from .hexagon import HexagonSpec, NotSimpleError, TypeReport, classify, spec_from_polygon
from .lattice import (
    HnfTriple,
    IDENTITY_MAP,
    IntBasis,
    SingularBasisError,
    UnimodularMap,
    covering_modulus,
    enumerate_hnf,
    hnf_of_basis,
    lattices_isometric,
    rectangular_solve,
    sl2_reduce,
)
from .moduli import (
    Arc,
    RegionGrid,
    connected_components,
    membership,
    membership_mask,
    sample_region,
    type_iii_boundary,
)
from .validate import (
    TilingCensus,
    ToleranceAmbiguityError,
    ValidationReport,
    census,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "Arc",
    "B_POINT",
    "Congruence",
    "CurveParams",
    "DegenerateError",
    "FreeVector",
    "G_POINT",
    "G_PRIME",
    "GenericityWarning",
    "HexagonSpec",
    "HnfTriple",
    "HopfEmbedding",
    "IDENTITY_MAP",
    "IncompatibilityError",
    "IntBasis",
    "Isometry",
    "MERGE_TOL",
    "MINIMAL_TILE_COUNT",
    "Mesh3",
    "ModuliViolation",
    "NotSimpleError",
    "OMEGA3",
    "OMEGA3_CURVE",
    "PlanarPatch",
    "PoleError",
    "Polygon",
    "R_POINT",
    "RectEmbedding",
    "RegionGrid",
    "SingularBasisError",
    "TilingCensus",
    "ToleranceAmbiguityError",
    "TorusTiling",
    "TypeReport",
    "UnimodularMap",
    "ValidationReport",
    "build_cover",
    "census",
    "central_minimal",
    "classify",
    "conformality",
    "congruent",
    "connected_components",
    "corner_angle",
    "covering_modulus",
    "curve_invariants",
    "drape_tiling",
    "enumerate_coverings",
    "enumerate_hnf",
    "hnf_of_basis",
    "hopf_torus_mesh",
    "is_minimal",
    "is_simple",
    "lattices_isometric",
    "membership",
    "membership_mask",
    "planar_patch",
    "rect_embed",
    "rect_torus_mesh",
    "rectangular_solve",
    "sample_region",
    "signed_area",
    "sl2_reduce",
    "spec_from_polygon",
    "strip_tiling",
    "type_i_minimal",
    "type_ii_minimal",
    "type_iii_minimal",
    "type_iii_boundary",
    "validate",
]
