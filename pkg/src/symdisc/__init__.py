"""Bounded analytic function toolkit for symmetrized polydiscs."""

from .errors import (
    ConditionViolated,
    DegreeError,
    DimensionError,
    DomainError,
    GramMismatch,
    Infeasible,
    InterpolationResidual,
    NotContraction,
    NotHermitian,
    NotInvertible,
    NotIsometric,
    NotPSD,
    NotSymmetric,
    PoleHit,
    SchemaError,
    Singular,
    SymdiscError,
    UnimodularityError,
    ZeroInDomain,
)
from .linalg import extend_isometry, gram_factor, psd_sqrt, unitary_dilation
from .sympoly import (
    MultiPoly,
    in_gd,
    is_symmetric,
    poly_eval,
    reflect_G,
    reflect_polydisc,
    sym_point,
    symmetric_to_elementary,
)
from .rif import RationalInnerFn, build_rif, check_inner, eval_rif, sample_bGd, sample_Gd
from .realization import (
    Colligation,
    adjoint_tfr,
    check_colligation,
    embed_in_inner,
    eval_tfr,
    phi,
    schur_norm_estimate,
)
from .pick import (
    AglerCert,
    PickProblem,
    build_doubly_symmetric_tau,
    lift_node,
    lurking_isometry,
    solve_agler_feasibility,
    solve_pick,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
