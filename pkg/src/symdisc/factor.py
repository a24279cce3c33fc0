"""Composition and splitting of Schur-class transfer functions.

A product of two realizations has a colligation with a block upper
triangular state structure; conversely, structural conditions on such a
colligation let the product be split back into Schur-class factors.  Three
variants are covered: a factor invertible at the origin, a self-adjoint
invertible factor with the other vanishing at the origin, and both factors
vanishing at the origin.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConditionViolated,
    DimensionError,
    NotInvertible,
    NotIsometric,
    ShapeMismatch,
)
from .linalg import as_matrix, herm, max_abs, psd_sqrt
from .realization import Colligation, check_colligation

STRUCT_TOL = 1e-12
ISO_TOL = 1e-9
SPLIT_TOL = 1e-8


def _block_diag(t1: np.ndarray, t2: np.ndarray) -> np.ndarray:
    h1, h2 = t1.shape[0], t2.shape[0]
    out = np.zeros((h1 + h2, h1 + h2), dtype=complex)
    out[:h1, :h1] = t1
    out[h1:, h1:] = t2
    return out


@dataclass(frozen=True)
class StructuredColligation(Colligation):
    """Colligation whose state space carries a declared split H1 + H2.

    The blocks follow the product structure: B = [B1 B2], C = [C1; C2],
    D = [[D1, D2], [0, D3]] with tau block diagonal.  The lower-left D
    block is normalized to exact zero; tau must respect the split within
    1e-12.
    """

    h1: int = 0
    h2: int = 0

    def __post_init__(self):
        super().__post_init__()
        h1, h2 = int(self.h1), int(self.h2)
        if h1 < 0 or h2 < 0 or h1 + h2 != self.h:
            raise ShapeMismatch(f"state split {h1}+{h2} does not match h={self.h}")
        if self.A.shape[0] != self.A.shape[1]:
            raise ShapeMismatch(f"structured colligation needs square A, got {self.A.shape}")
        off = max(
            max_abs(self.tau[:h1, h1:]),
            max_abs(self.tau[h1:, :h1]),
        )
        if off > STRUCT_TOL:
            raise ShapeMismatch(f"tau mixes the state split (off-diagonal {off:.3e})")
        low = max_abs(self.D[h1:, :h1])
        if low > STRUCT_TOL:
            raise ShapeMismatch(f"D lower-left block must vanish, got {low:.3e}")
        D = self.D.copy()
        D[h1:, :h1] = 0.0
        object.__setattr__(self, "D", D)

    # Named sub-blocks from the product structure.
    @property
    def B1(self) -> np.ndarray:
        return self.B[:, : self.h1]

    @property
    def B2(self) -> np.ndarray:
        return self.B[:, self.h1 :]

    @property
    def C1(self) -> np.ndarray:
        return self.C[: self.h1, :]

    @property
    def C2(self) -> np.ndarray:
        return self.C[self.h1 :, :]

    @property
    def D1(self) -> np.ndarray:
        return self.D[: self.h1, : self.h1]

    @property
    def D2(self) -> np.ndarray:
        return self.D[: self.h1, self.h1 :]

    @property
    def D3(self) -> np.ndarray:
        return self.D[self.h1 :, self.h1 :]

    @property
    def tau1(self) -> np.ndarray:
        return self.tau[: self.h1, : self.h1]

    @property
    def tau2(self) -> np.ndarray:
        return self.tau[self.h1 :, self.h1 :]


def _require_isometric(V: Colligation, tol: float, who: str) -> None:
    res = check_colligation(V)["isometry"]
    if res > tol:
        raise NotIsometric(f"{who} has isometry residual {res:.3e}", residual=res)


def compose_colligations(V1: Colligation, V2: Colligation) -> StructuredColligation:
    """Colligation of the product psi1 * psi2 from colligations of the factors.

    Both factors must be isometric with a shared square interface; the
    composed block matrix is

        [[A1 A2, B1, A1 B2],
         [C1 A2, D1, C1 B2],
         [C2,     0,    D2]]

    with tau = diag(tau1, tau2), and its transfer function is the pointwise
    product of the factors' transfer functions.
    """
    n = V1.A.shape[1]
    if V1.A.shape != (n, n) or V2.A.shape != (n, n):
        raise ShapeMismatch(
            f"factors need matching square interfaces, got {V1.A.shape} and {V2.A.shape}"
        )
    _require_isometric(V1, ISO_TOL, "first factor")
    _require_isometric(V2, ISO_TOL, "second factor")
    h1, h2 = V1.h, V2.h
    A = V1.A @ V2.A
    B = np.zeros((n, h1 + h2), dtype=complex)
    B[:, :h1] = V1.B
    B[:, h1:] = V1.A @ V2.B
    C = np.zeros((h1 + h2, n), dtype=complex)
    C[:h1, :] = V1.C @ V2.A
    C[h1:, :] = V2.C
    D = np.zeros((h1 + h2, h1 + h2), dtype=complex)
    D[:h1, :h1] = V1.D
    D[:h1, h1:] = V1.C @ V2.B
    D[h1:, h1:] = V2.D
    return StructuredColligation(
        tau=_block_diag(V1.tau, V2.tau), A=A, B=B, C=C, D=D, h1=h1, h2=h2
    )


def _inv_checked(M: np.ndarray, what: str) -> np.ndarray:
    if M.size == 0:
        return M.copy()
    cond = np.linalg.cond(M)
    if not np.isfinite(cond) or cond > 1e12:
        raise NotInvertible(f"{what} is numerically singular (cond {cond:.3e})")
    return np.linalg.inv(M)


def check_factor_conditions(V: StructuredColligation, variant: str, aux: dict | None = None) -> dict[str, float]:
    """Residuals of the structural factorization conditions, max-entry norm.

    variant "invertible" (aux: A1, A2):
        D2 = C1 A^{-1} B2,  A = A1 A2,  A2* A2 = A* A + C1* C1.
    variant "zero-selfadjoint" (aux: A, default the PSD root of C1* C1):
        A-block = 0, B2 = 0, C1 A^{-2} C1* D2 = D2, C1* C1 = A^2.
    variant "zero-zero" (aux: X isometry, Y):
        A-block = 0, C1 = 0, B2 = 0, X* D1 = 0, D2 = X Y.
    """
    aux = aux or {}
    if not isinstance(V, StructuredColligation):
        raise ShapeMismatch("check_factor_conditions needs a StructuredColligation")
    if variant == "invertible":
        if "A1" not in aux or "A2" not in aux:
            raise ShapeMismatch("variant 'invertible' needs aux A1, A2")
        A1, A2 = as_matrix(aux["A1"]), as_matrix(aux["A2"])
        Ainv = _inv_checked(V.A, "A")
        return {
            "d2": max_abs(V.D2 - V.C1 @ Ainv @ V.B2),
            "a_product": max_abs(V.A - A1 @ A2),
            "a2_gram": max_abs(herm(A2) @ A2 - (herm(V.A) @ V.A + herm(V.C1) @ V.C1)),
        }
    if variant == "zero-selfadjoint":
        A = as_matrix(aux["A"]) if "A" in aux else psd_sqrt(herm(V.C1) @ V.C1)
        if A.shape != V.A.shape:
            raise ShapeMismatch(f"aux A has shape {A.shape}, expected {V.A.shape}")
        Ainv2 = _inv_checked(A @ A, "A^2")
        return {
            "a_zero": max_abs(V.A),
            "b2_zero": max_abs(V.B2),
            "cond1_d2": max_abs(V.C1 @ Ainv2 @ herm(V.C1) @ V.D2 - V.D2),
            "cond1_gram": max_abs(herm(V.C1) @ V.C1 - A @ A),
        }
    if variant == "zero-zero":
        if "X" not in aux or "Y" not in aux:
            raise ShapeMismatch("variant 'zero-zero' needs aux X, Y")
        X, Y = as_matrix(aux["X"]), as_matrix(aux["Y"])
        n = V.A.shape[0]
        if X.shape != (V.h1, n) or Y.shape != (n, V.h2):
            raise ShapeMismatch(
                f"X must be {V.h1} x {n} and Y {n} x {V.h2}, got {X.shape}, {Y.shape}"
            )
        return {
            "a_zero": max_abs(V.A),
            "c1_zero": max_abs(V.C1),
            "b2_zero": max_abs(V.B2),
            "x_iso": max_abs(herm(X) @ X - np.eye(n)),
            "xd1": max_abs(herm(X) @ V.D1),
            "d2_xy": max_abs(V.D2 - X @ Y),
        }
    raise ShapeMismatch(f"unknown variant {variant!r}")


def split_invertible(V: StructuredColligation, tol: float = SPLIT_TOL) -> tuple[Colligation, Colligation]:
    """Split theta with theta(0,0) invertible into two Schur factors.

    Uses the canonical choice A2 = (A*A + C1*C1)^{1/2}, A1 = A A2^{-1} and the
    factor colligations [[A1, B1], [C1 A2^{-1}, D1]], [[A2, A1^{-1} B2], [C2, D3]].
    """
    _require_isometric(V, tol, "structured colligation")
    Ainv = _inv_checked(V.A, "A")
    A2 = psd_sqrt(herm(V.A) @ V.A + herm(V.C1) @ V.C1)
    A2inv = _inv_checked(A2, "A2")
    A1 = V.A @ A2inv
    dev = max_abs(V.D2 - V.C1 @ Ainv @ V.B2)
    if dev > tol:
        raise ConditionViolated(f"D2 = C1 A^-1 B2 fails by {dev:.3e}", residual=dev)
    V1 = Colligation(tau=V.tau1, A=A1, B=V.B1, C=V.C1 @ A2inv, D=V.D1)
    V2 = Colligation(tau=V.tau2, A=A2, B=_inv_checked(A1, "A1") @ V.B2, C=V.C2, D=V.D3)
    for W, who in ((V1, "first factor"), (V2, "second factor")):
        res = check_colligation(W)["isometry"]
        if res > tol:
            raise ConditionViolated(
                f"{who} not isometric after split (residual {res:.3e})", residual=res
            )
    return V1, V2


def split_zero_selfadjoint(V: StructuredColligation, tol: float = SPLIT_TOL) -> tuple[Colligation, Colligation]:
    """Split theta(0,0) = 0 with a self-adjoint invertible second factor.

    Reconstructs A as the PSD root of C1* C1 (the branch fixed by the
    condition C1* C1 = A^2) and forms
    [[0, B1], [C1 A^{-1}, D1]], [[A, A^{-1} C1* D2], [C2, D3]].
    """
    _require_isometric(V, tol, "structured colligation")
    if max_abs(V.A) > tol:
        raise ConditionViolated(f"A-block must vanish, got {max_abs(V.A):.3e}")
    if max_abs(V.B2) > tol:
        raise ConditionViolated(f"B2-block must vanish, got {max_abs(V.B2):.3e}")
    gram = herm(V.C1) @ V.C1
    A = psd_sqrt(gram)
    Ainv = _inv_checked(A, "A = (C1* C1)^{1/2}")
    dev = max_abs(V.C1 @ Ainv @ Ainv @ herm(V.C1) @ V.D2 - V.D2)
    if dev > tol:
        raise ConditionViolated(f"C1 A^-2 C1* D2 = D2 fails by {dev:.3e}", residual=dev)
    B2 = Ainv @ herm(V.C1) @ V.D2
    n = V.A.shape[0]
    V1 = Colligation(tau=V.tau1, A=np.zeros((n, n), dtype=complex), B=V.B1, C=V.C1 @ Ainv, D=V.D1)
    V2 = Colligation(tau=V.tau2, A=A, B=B2, C=V.C2, D=V.D3)
    for W, who in ((V1, "first factor"), (V2, "second factor")):
        res = check_colligation(W)["isometry"]
        if res > tol:
            raise ConditionViolated(
                f"{who} not isometric after split (residual {res:.3e})", residual=res
            )
    return V1, V2


def split_zero_zero(
    V: StructuredColligation, X, Y, tol: float = SPLIT_TOL
) -> tuple[Colligation, Colligation]:
    """Split theta with both factors vanishing at the origin.

    The caller supplies the isometry X and the matrix Y witnessing
    X* D1 = 0 and D2 = X Y; the factors are reassembled by running the
    composition pattern backwards:
    [[0, B1], [X, D1]] and [[0, Y], [C2, D3]].
    """
    _require_isometric(V, tol, "structured colligation")
    X, Y = as_matrix(X), as_matrix(Y)
    n = V.A.shape[0]
    if X.shape != (V.h1, n):
        raise ShapeMismatch(f"X must be {V.h1} x {n}, got {X.shape}")
    if Y.shape != (n, V.h2):
        raise ShapeMismatch(f"Y must be {n} x {V.h2}, got {Y.shape}")
    if max_abs(V.A) > tol:
        raise ConditionViolated(f"A-block must vanish, got {max_abs(V.A):.3e}")
    if max_abs(V.C1) > tol:
        raise ConditionViolated(f"C1-block must vanish, got {max_abs(V.C1):.3e}")
    if max_abs(V.B2) > tol:
        raise ConditionViolated(f"B2-block must vanish, got {max_abs(V.B2):.3e}")
    iso = max_abs(herm(X) @ X - np.eye(n))
    if iso > ISO_TOL:
        raise NotIsometric(f"X is not an isometry (residual {iso:.3e})", residual=iso)
    dev = max_abs(herm(X) @ V.D1)
    if dev > tol:
        raise ConditionViolated(f"X* D1 = 0 fails by {dev:.3e}", residual=dev)
    dev = max_abs(V.D2 - X @ Y)
    if dev > tol:
        raise ConditionViolated(f"D2 = X Y fails by {dev:.3e}", residual=dev)
    zero = np.zeros((n, n), dtype=complex)
    V1 = Colligation(tau=V.tau1, A=zero, B=V.B1, C=X, D=V.D1)
    V2 = Colligation(tau=V.tau2, A=zero.copy(), B=Y, C=V.C2, D=V.D3)
    for W, who in ((V1, "first factor"), (V2, "second factor")):
        res = check_colligation(W)["isometry"]
        if res > tol:
            raise ConditionViolated(
                f"{who} not isometric after split (residual {res:.3e})", residual=res
            )
    return V1, V2
