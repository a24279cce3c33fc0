"""Exception hierarchy shared by all symdisc modules.

Every error carries a stable ``code`` string (used by the CLI for
machine-readable error JSON) and an optional ``residual`` recording how
badly a numerical contract was violated.
"""

from __future__ import annotations


class SymdiscError(Exception):
    code = "Error"

    def __init__(self, detail: str = "", residual: float | None = None):
        self.detail = detail
        self.residual = residual
        msg = detail
        if residual is not None:
            msg = f"{detail} (residual={residual:.3e})" if detail else f"residual={residual:.3e}"
        super().__init__(msg)


class NotHermitian(SymdiscError):
    code = "NotHermitian"


class NotPSD(SymdiscError):
    code = "NotPSD"


class GramMismatch(SymdiscError):
    code = "GramMismatch"


class DimensionError(SymdiscError):
    code = "DimensionError"


class NotContraction(SymdiscError):
    code = "NotContraction"


class DegreeError(SymdiscError):
    code = "DegreeError"


class NotSymmetric(SymdiscError):
    code = "NotSymmetric"


class ZeroInDomain(SymdiscError):
    code = "ZeroInDomain"


class UnimodularityError(SymdiscError):
    code = "UnimodularityError"


class PoleHit(SymdiscError):
    code = "PoleHit"


class Singular(SymdiscError):
    code = "Singular"


class DomainError(SymdiscError):
    code = "DomainError"


class ShapeMismatch(SymdiscError):
    code = "ShapeMismatch"


class NotIsometric(SymdiscError):
    code = "NotIsometric"


class NotInvertible(SymdiscError):
    code = "NotInvertible"


class ConditionViolated(SymdiscError):
    code = "ConditionViolated"


class Infeasible(SymdiscError):
    code = "Infeasible"


class InterpolationResidual(SymdiscError):
    code = "InterpolationResidual"


class SchemaError(SymdiscError):
    code = "SchemaError"
