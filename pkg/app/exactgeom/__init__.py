from app.exactgeom.hull import (
    AffineEquality,
    AffineFunctional,
    BudgetExceededError,
    DimensionMismatchError,
    EmptyPolyhedronError,
    HRep,
    Inside,
    MembershipCertificate,
    Outside,
    UnboundedPolyhedronError,
    VRep,
    extreme_rays,
    facets_from_vrep,
    lp_membership,
    verify_certificate,
    vertices_from_hrep,
)
from app.exactgeom.linalg import AffineHull, affine_hull, affine_rank, null_space, primitive, rank, rref

__all__ = [
    "AffineEquality",
    "AffineFunctional",
    "AffineHull",
    "BudgetExceededError",
    "DimensionMismatchError",
    "EmptyPolyhedronError",
    "HRep",
    "Inside",
    "MembershipCertificate",
    "Outside",
    "UnboundedPolyhedronError",
    "VRep",
    "affine_hull",
    "affine_rank",
    "extreme_rays",
    "facets_from_vrep",
    "lp_membership",
    "null_space",
    "primitive",
    "rank",
    "rref",
    "verify_certificate",
    "vertices_from_hrep",
]
