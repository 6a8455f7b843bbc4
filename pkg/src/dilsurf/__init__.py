"""Dilation surfaces from glued polygons: validation, straight-line flow,
cylinder decompositions, and Thurston-Veech style constructions."""

from .geom import (
    TOL,
    AffineMap,
    DilationError,
    Mat2,
    NonPositiveDeterminant,
    TraceClass,
    Vec2,
    classify_trace,
)
from .surface import (
    BoundaryEdge,
    DilationSurface,
    EdgeRef,
    Gluing,
    MalformedInput,
    NonConvexQuad,
    NotClosedSurface,
    Polygon,
    ValidationReport,
    VertexClass,
    apply_matrix,
    euler_genus,
    flip_edge,
    triangulate,
    validate,
    vertex_classes,
)
from .holonomy import (
    BrokenWord,
    HolonomyRep,
    LoopWord,
    holonomy_basis,
    is_trivial_on,
    link_word,
    loop_holonomy,
)
from .flow import (
    Budget,
    Certificate,
    ClosedOrbit,
    Cylinder,
    Decomposition,
    DegenerateStart,
    Direction,
    Fail,
    NotDecomposable,
    NotParabolic,
    PointStart,
    SaddleConnection,
    SectorStart,
    certify_multitwist,
    directional_decomposition,
    separatrices,
    shear_data,
    trace_ray,
)
from .thurston import (
    CompatibleReport,
    CompatibleSpace,
    CurveSystem,
    DimensionMismatch,
    ModulusSpec,
    NoConvergence,
    NotIrreducible,
    PFResult,
    ThurstonOutput,
    assemble_surface,
    build_U,
    check_compatible_prop,
    compatible_holonomy_space,
    power_iteration,
    thurston_construct,
    twist_action,
)
from .isom import (
    NotFound,
    Verified,
    Witness,
    WitnessPiece,
    WitnessReport,
    identity_witness,
    is_affine_automorphism,
    search_isomorphism,
    verify_witness,
)
from .constructions import (
    NonParallelSlits,
    SlitThroughVertex,
    exotic_dehn_surface,
    hopf_slit_sum,
    hopf_torus,
    l_curve_system,
    octagon_curve_system,
    slit_connect_sum,
    square_torus,
    staircase_surface,
)

__version__ = "0.1.0"
