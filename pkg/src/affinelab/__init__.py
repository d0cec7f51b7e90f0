"""Geodesic flows on exponential-affine surfaces and their conjugacy problem.

The package splits into layers: exact/approximate complex arithmetic and
lattices (`arithmetic`, `exactfield`), quotient surfaces (`surfaces`), the
flow itself with its bifurcation structure (`flow`, `automorphisms`), the
conjugacy decision procedures (`conjugacy`), witness lifting and numerical
verification (`lift`), and a JSON/CSV command line front end (`cli`).
"""

from .arithmetic import (
    DEFAULT_TOLERANCE,
    ComplexValue,
    Lattice,
    Tolerance,
    as_complex_value,
    covolume,
    enumerate_norm_shell,
    is_near_integer,
    lattice_member,
    parse_complex,
    principal_log,
    reduce_basis,
)
from .automorphisms import (
    SurfaceAutomorphism,
    conjugates_h_to_inverse,
    marking_automorphism,
)
from .conjugacy import (
    ConjugacyMode,
    ConjugacyVerdict,
    CylinderRealLinear,
    CylinderScalar,
    IdentityWitness,
    MarkedTorus,
    TorusRealLinear,
    TorusScalar,
    decide,
    decide_cylinder,
    decide_torus_holomorphic,
    decide_torus_topological,
    make_marked_torus,
    orbit_order,
    search_torus_real_linear,
    torus_scalar_witnesses,
)
from .errors import (
    AffineLabError,
    DomainError,
    InvariantError,
    ParseError,
    UsageError,
)
from .flow import (
    ClosedGeodesicWitness,
    EmptyTrajectoryError,
    FlowClassification,
    FlowUndefinedError,
    MaximalInterval,
    boundary_flow,
    boundary_flow_inverse,
    classify,
    closed_geodesic_witness,
    flow,
    flow_complex,
    has_closed_geodesics,
    maximal_interval,
    trajectory,
)
from .lift import (
    PASS_TOLERANCE,
    STANDARD_T_GRID,
    BaseMap,
    LiftedConjugacy,
    VerificationReport,
    base_invariant_deviation,
    branch_independence,
    build_base,
    lift,
    run_verification,
    verification_passed,
    verify_boundary_relations,
    verify_flow_conjugacy,
)
from .surfaces import (
    AffineSurface,
    DiscreteGroup,
    SurfacePoint,
    TangentVector,
    parse_surface,
    points_equal,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "AffineLabError",
    "ParseError",
    "DomainError",
    "InvariantError",
    "UsageError",
    "ComplexValue",
    "Tolerance",
    "DEFAULT_TOLERANCE",
    "Lattice",
    "as_complex_value",
    "parse_complex",
    "principal_log",
    "is_near_integer",
    "reduce_basis",
    "covolume",
    "lattice_member",
    "enumerate_norm_shell",
    "DiscreteGroup",
    "AffineSurface",
    "SurfacePoint",
    "TangentVector",
    "points_equal",
    "parse_surface",
    "MaximalInterval",
    "FlowClassification",
    "FlowUndefinedError",
    "EmptyTrajectoryError",
    "ClosedGeodesicWitness",
    "classify",
    "maximal_interval",
    "flow",
    "flow_complex",
    "boundary_flow",
    "boundary_flow_inverse",
    "trajectory",
    "has_closed_geodesics",
    "closed_geodesic_witness",
    "SurfaceAutomorphism",
    "marking_automorphism",
    "conjugates_h_to_inverse",
    "ConjugacyMode",
    "MarkedTorus",
    "IdentityWitness",
    "CylinderScalar",
    "CylinderRealLinear",
    "TorusScalar",
    "TorusRealLinear",
    "ConjugacyVerdict",
    "decide",
    "decide_cylinder",
    "decide_torus_holomorphic",
    "decide_torus_topological",
    "make_marked_torus",
    "torus_scalar_witnesses",
    "search_torus_real_linear",
    "orbit_order",
    "BaseMap",
    "LiftedConjugacy",
    "VerificationReport",
    "STANDARD_T_GRID",
    "PASS_TOLERANCE",
    "build_base",
    "base_invariant_deviation",
    "lift",
    "verify_flow_conjugacy",
    "verify_boundary_relations",
    "branch_independence",
    "run_verification",
    "verification_passed",
]
