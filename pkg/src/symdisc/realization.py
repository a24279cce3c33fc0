"""Transfer-function realizations on the symmetrized bidisc.

A colligation is a block matrix V = [[A, B], [C, D]] together with a
unitary state-space operator tau; its transfer function is

    Psi(s, p) = A + B phi(tau, s, p) (I - D phi(tau, s, p))^{-1} C,

driven by the contraction-valued map phi(tau, s, p) = (2p tau - s)(2 - s tau)^{-1}.
Isometric V give Schur-class functions; unitary V give rational inner ones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, NotContraction, Singular
from .linalg import as_matrix, herm, max_abs, op_norm, unitary_dilation
from .rif import sample_Gd
from .sympoly import companion_roots

COND_LIMIT = 1e12
GD_MARGIN = 1e-12
CLOSURE_SLACK = 1e-9


def in_g(s: complex, p: complex, margin: float = GD_MARGIN) -> bool:
    """Strict interior test: both roots of z^2 - s z + p inside the unit disc."""
    r = companion_roots([s, p])
    return bool(np.max(np.abs(r)) < 1.0 - margin)


def _in_g_closure(s: complex, p: complex) -> bool:
    r = companion_roots([s, p])
    return bool(np.max(np.abs(r)) <= 1.0 + CLOSURE_SLACK)


def _solve_checked(M: np.ndarray, rhs: np.ndarray, what: str) -> np.ndarray:
    if M.size == 0:
        return np.zeros((M.shape[1], rhs.shape[1]), dtype=complex)
    cond = np.linalg.cond(M)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise Singular(f"{what} has condition number {cond:.3e}")
    return np.linalg.solve(M, rhs)


def phi(tau: np.ndarray, s: complex, p: complex) -> np.ndarray:
    """The fractional map (2 p tau - s I)(2 I - s tau)^{-1}.

    tau must be unitary; for |s| < 2 the resolvent factor is invertible.
    On the distinguished boundary (|p| = 1, s = conj(s) p) the value is
    unitary; on the domain it is a strict contraction.
    """
    tau = as_matrix(tau) if np.ndim(tau) else np.array([[tau]], dtype=complex)
    h = tau.shape[0]
    if tau.shape != (h, h):
        raise DimensionError(f"tau must be square, got {tau.shape}")
    if h == 0:
        return np.zeros((0, 0), dtype=complex)
    eye = np.eye(h, dtype=complex)
    num = 2.0 * p * tau - s * eye
    den = 2.0 * eye - s * tau
    # X = num @ den^{-1} computed as a solve on the transposed system.
    Xt = _solve_checked(den.T, num.T, "2 - s*tau")
    return Xt.T


@dataclass(frozen=True)
class Colligation:
    """Block colligation (A, B, C, D) with state unitary tau.

    Shapes: A is M x N, B is M x h, C is h x N, D is h x h, tau is h x h
    unitary; h is the size of the realization.
    """

    tau: np.ndarray
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        for name in ("tau", "A", "B", "C", "D"):
            object.__setattr__(self, name, as_matrix(getattr(self, name)))
        h = self.tau.shape[0]
        if self.tau.shape != (h, h):
            raise DimensionError(f"tau must be square, got {self.tau.shape}")
        m, n = self.A.shape
        if self.B.shape != (m, h) or self.C.shape != (h, n) or self.D.shape != (h, h):
            raise DimensionError(
                f"inconsistent blocks: A{self.A.shape} B{self.B.shape} C{self.C.shape} D{self.D.shape}"
            )
        dev = max_abs(herm(self.tau) @ self.tau - np.eye(h)) if h else 0.0
        if dev > 1e-10:
            raise DimensionError(f"tau is not unitary (residual {dev:.3e})")

    @property
    def h(self) -> int:
        return self.tau.shape[0]

    @property
    def out_dim(self) -> int:
        return self.A.shape[0]

    @property
    def in_dim(self) -> int:
        return self.A.shape[1]

    def block_matrix(self) -> np.ndarray:
        """The (M+h) x (N+h) matrix [[A, B], [C, D]]."""
        return np.block([[self.A, self.B], [self.C, self.D]])

    @classmethod
    def from_block(cls, V: np.ndarray, tau: np.ndarray, out_dim: int, in_dim: int) -> "Colligation":
        V = as_matrix(V)
        m, n = out_dim, in_dim
        return cls(tau=tau, A=V[:m, :n], B=V[:m, n:], C=V[m:, :n], D=V[m:, n:])

    def __call__(self, s: complex, p: complex) -> np.ndarray:
        return eval_tfr(self, s, p)


def eval_tfr(V: Colligation, s: complex, p: complex) -> np.ndarray:
    """Evaluate the transfer function at (s, p) in the closed domain.

    Uses one linear solve for (I - D phi)^{-1} C. Raises DomainError for
    points outside the closure of the symmetrized bidisc and Singular when
    I - D phi is numerically singular.
    """
    if not _in_g_closure(s, p):
        raise DomainError(f"({s}, {p}) outside the closed symmetrized bidisc")
    ph = phi(V.tau, s, p)
    if V.h == 0:
        return V.A.copy()
    G = np.eye(V.h, dtype=complex) - V.D @ ph
    X = _solve_checked(G, V.C, "I - D*phi")
    return V.A + V.B @ ph @ X


def check_colligation(V: Colligation) -> dict[str, float]:
    """Residuals {isometry, unitarity, tau} in max-entry norm."""
    M = V.block_matrix()
    iso = max_abs(herm(M) @ M - np.eye(M.shape[1]))
    uni = max_abs(M @ herm(M) - np.eye(M.shape[0]))
    h = V.h
    tau_res = max_abs(herm(V.tau) @ V.tau - np.eye(h)) if h else 0.0
    return {"isometry": iso, "unitarity": uni, "tau": tau_res}


def adjoint_tfr(V: Colligation) -> Colligation:
    """Colligation of (s, p) -> Psi(conj(s), conj(p))*.

    The block matrix of the result is V* and the state unitary is tau*;
    pointwise, eval_tfr(adjoint_tfr(V), s, p) == eval_tfr(V, conj(s), conj(p))*.
    """
    return Colligation(
        tau=herm(V.tau),
        A=herm(V.A),
        B=herm(V.C),
        C=herm(V.B),
        D=herm(V.D),
    )


def embed_in_inner(V: Colligation, tol: float = 1e-10) -> tuple[Colligation, int, int]:
    """Embed a contractive colligation into a unitary one of the same size.

    Returns (W, row_index, col_index) where W is a unitary colligation with
    the same tau and state dimension, and the original transfer function is
    the top-left row_index x col_index block of W's transfer function.

    The block matrix of V is dilated to a unitary and its rows/columns are
    rearranged so the original D stays in the state corner and the original
    A, B, C stay in the selected corner blocks.
    """
    U = V.block_matrix()
    if op_norm(U) > 1.0 + tol:
        raise NotContraction(f"colligation block matrix has norm {op_norm(U):.6f}")
    m, n, h = V.out_dim, V.in_dim, V.h
    rep = check_colligation(V)
    if max(rep["isometry"], rep["unitarity"]) <= tol:
        # Already unitary: nothing to add.
        return V, m, n

    W0 = unitary_dilation(U, tol)
    # W0 row blocks: [M, h, N', h2'], column blocks: [N, h, M', h2']
    rows = list(range(0, m)) + list(range(m + h, m + h + n + h)) + list(range(m, m + h))
    cols = list(range(0, n)) + list(range(n + h, n + h + m + h)) + list(range(n, n + h))
    W = W0[np.ix_(rows, cols)]
    L_out = m + n + h
    L_in = n + m + h
    big = Colligation.from_block(W, V.tau, L_out, L_in)
    return big, m, n


def schur_norm_estimate(V: Colligation, count: int = 1000, seed: int = 0) -> float:
    """Max operator norm of the transfer function over sampled domain points."""
    pts = sample_Gd(2, count, seed)
    best = 0.0
    for s, p in pts:
        try:
            val = eval_tfr(V, complex(s), complex(p))
        except Singular:
            continue
        best = max(best, op_norm(val))
    return best
