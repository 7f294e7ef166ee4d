"""Exact invariants of left-invariant almost complex structures with Norden
metric on Lie groups: connection, classification, curvature and Weyl tensor,
over rational polynomials in symbolic structure-constant parameters."""

from .connection import (
    classify,
    f_tensor,
    levi_civita,
    lie_forms,
    nabla_j_square_norm,
    nijenhuis,
    w2_condition_check,
)
from .curvature import (
    curvature_like,
    curvature_tensor,
    holomorphic_constancy_check,
    holomorphic_sectional_curvature,
    isotropic_kahler_battery,
    norm_curvature_relation_check,
    ricci_and_scalars,
    sectional_curvature,
    weyl_tensor,
)
from .errors import (
    DegeneratePlaneError,
    DimensionError,
    InternalConsistencyError,
    InvalidStructureError,
    NordgeomError,
    SingularMetricError,
)
from .families import build_paper_family, random_valid_algebra, verify_golden_tables
from .frame import (
    FrameStructure,
    GeometrySetup,
    LieAlgebra,
    Verdict,
    check_antisymmetry,
    check_jacobi,
    check_norden,
    standard_norden_frame,
)
from .invariants import compute_invariants
from .scalars import Scalar, scalar_add, scalar_eval, scalar_mul, scalar_parse

__version__ = "0.1.0"
