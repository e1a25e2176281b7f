"""Complementarity partitions for multifold linear conic optimization.

Problems  min c.x  s.t.  A^j x - b^j in K_j  over products of orthants,
Lorentz cones and small PSD cones are solved, and each block index is
classified into the four-set partition (B, N, R, T) and the six-set
partition (B, N, B', N', O, C) by probing the primal and dual optimal
faces with auxiliary cone programs.
"""

from .cones import (
    DEFAULT_TOL,
    CertificateError,
    ConeKind,
    ConeSpec,
    Membership,
    MembershipClass,
    classify_membership,
    in_ri_normal_cone,
    interior_point,
    numeric_rank,
    polar,
    smat,
    svec,
    svec_dim,
    sym,
)
from .homogeneous import (
    GeneratedCone,
    UnsupportedConeError,
    check_r0_inclusion,
    classify_six_dual,
    image_cone,
    lineality,
)
from .lifting import (
    ComparisonReport,
    HypothesisReport,
    LiftKind,
    LiftMap,
    arrow,
    arrow_adjoint,
    arrow_lift,
    compare_partitions,
    identity_lift,
    lift_problem,
    transport_dual,
    verify_hypotheses,
)
from .model import (
    ConicProblem,
    PrimalDualPair,
    ResidualReport,
    aggregate_witnesses,
    dual_objective,
    primal_objective,
    residuals,
)
from .partition import (
    FourPartition,
    PartitionReport,
    RelationCheck,
    SixPartition,
    check_relations,
    classify,
    strict_complementarity,
)
from .solver import (
    Side,
    SolveOptions,
    SolveResult,
    SolveStatus,
    SolverError,
    SupportSide,
    SupportValue,
    face_point,
    min_norm_face_point,
    polish_pair,
    solve,
    support_interior,
    support_nonzero,
)

__version__ = "0.1.0"
