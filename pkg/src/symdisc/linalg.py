"""Dense complex linear-algebra primitives.

Everything here works on plain ``numpy`` complex matrices: PSD Gram
factorization, extension of partially defined isometries, unitary dilation
of contractions and Hermitian square roots.  These are the building blocks
the realization, interpolation and factorization modules share.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import DimensionError, GramMismatch, NotContraction, NotHermitian, NotPSD

DEFAULT_TOL = 1e-10


def as_matrix(a) -> np.ndarray:
    """Coerce input to a 2-D complex ndarray (copies only if needed)."""
    m = np.asarray(a, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    if m.ndim != 2:
        raise DimensionError(f"expected a matrix, got ndim={m.ndim}")
    return m


def max_abs(a) -> float:
    """Max-entry norm; 0 for empty arrays."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def herm(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def op_norm(a: np.ndarray) -> float:
    """Operator (spectral) norm; 0 for empty matrices."""
    a = np.asarray(a, dtype=complex)
    return float(np.linalg.norm(a, 2)) if a.size else 0.0


def _require_hermitian(P: np.ndarray, tol: float) -> None:
    dev = max_abs(P - herm(P))
    if dev > tol:
        raise NotHermitian(f"matrix deviates from Hermitian by {dev:.3e}", residual=dev)


def gram_factor(P, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Factor a Hermitian PSD matrix as ``P = F* F`` with ``F`` full row rank.

    Parameters
    ----------
    P : (n, n) array_like
        Hermitian matrix, positive semidefinite up to ``-tol``.
    tol : float
        Hermitian deviation bound and eigenvalue truncation threshold.
        Eigenvalues ``<= tol * max(lambda_max, 1)`` are treated as zero, so
        the row count of ``F`` is the numerical rank of ``P``.

    Returns
    -------
    (r, n) ndarray with ``F.conj().T @ F == P`` up to ``10 * tol``.
    """
    P = as_matrix(P)
    if P.shape[0] != P.shape[1]:
        raise DimensionError(f"gram_factor needs a square matrix, got {P.shape}")
    _require_hermitian(P, tol)
    H = (P + herm(P)) / 2.0
    w, V = np.linalg.eigh(H)
    if w.size and w[0] < -tol:
        raise NotPSD(f"min eigenvalue {w[0]:.3e} below -tol", residual=float(-w[0]))
    cutoff = tol * max(float(w[-1]) if w.size else 0.0, 1.0)
    keep = w > cutoff
    lam = w[keep]
    # Rows ordered by decreasing eigenvalue for a deterministic factor.
    order = np.argsort(lam)[::-1]
    lam = lam[order]
    U = V[:, keep][:, order]
    return (np.sqrt(lam)[:, None] * herm(U)).astype(complex)


def psd_sqrt(P, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Hermitian PSD square root via eigendecomposition, clamping at zero."""
    P = as_matrix(P)
    if P.shape[0] != P.shape[1]:
        raise DimensionError(f"psd_sqrt needs a square matrix, got {P.shape}")
    _require_hermitian(P, tol)
    H = (P + herm(P)) / 2.0
    w, V = np.linalg.eigh(H)
    if w.size and w[0] < -tol:
        raise NotPSD(f"min eigenvalue {w[0]:.3e} below -tol", residual=float(-w[0]))
    S = (V * np.sqrt(np.clip(w, 0.0, None))) @ herm(V)
    return (S + herm(S)) / 2.0


def unitary_dilation(T, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Dilate a contraction to a unitary.

    For an M x N contraction ``T`` returns the (M+N) x (M+N) unitary

        [[T,           (I - T T*)^{1/2}],
         [(I - T*T)^{1/2},          -T*]]

    whose top-left M x N block is ``T``.
    """
    T = as_matrix(T)
    smax = op_norm(T)
    if smax > 1.0 + tol:
        raise NotContraction(f"largest singular value {smax:.6f} exceeds 1", residual=smax - 1.0)
    m, n = T.shape
    dc = psd_sqrt(np.eye(m, dtype=complex) - T @ herm(T), tol)
    dr = psd_sqrt(np.eye(n, dtype=complex) - herm(T) @ T, tol)
    W = np.empty((m + n, m + n), dtype=complex)
    W[:m, :n] = T
    W[:m, n:] = dc
    W[m:, :n] = dr
    W[m:, n:] = -herm(T)
    return W


def _pivoted_orthonormalize(cols_x: np.ndarray, cols_y: np.ndarray, threshold: float):
    """Modified Gram-Schmidt with column pivoting, applied to paired columns.

    The same elementary operations are applied to the x- and y-sides so the
    correspondence ``x_i -> y_i`` carries over to the orthonormal bases.
    Columns whose residual norm falls at or below ``threshold`` are dropped
    as numerically dependent.
    """
    rx = cols_x.copy()
    ry = cols_y.copy()
    qx_list, qy_list = [], []
    n = rx.shape[1]
    alive = list(range(n))
    while alive:
        norms = [float(np.linalg.norm(rx[:, j])) for j in alive]
        jmax = int(np.argmax(norms))
        if norms[jmax] <= threshold:
            break
        j = alive.pop(jmax)
        nrm = norms[jmax]
        qx = rx[:, j] / nrm
        qy = ry[:, j] / nrm
        qx_list.append(qx)
        qy_list.append(qy)
        for c in alive:
            coef = np.vdot(qx, rx[:, c])
            rx[:, c] -= coef * qx
            ry[:, c] -= coef * qy
    qx_mat = np.array(qx_list).T if qx_list else np.zeros((rx.shape[0], 0), dtype=complex)
    qy_mat = np.array(qy_list).T if qy_list else np.zeros((ry.shape[0], 0), dtype=complex)
    # The y-side inherits the x-side combinations, so its orthonormality is
    # only as good as the Gram match; polar-correct both so the assembled
    # map is an isometry to machine precision.
    return _polar_orthonormalize(qx_mat), _polar_orthonormalize(qy_mat)


def _polar_orthonormalize(Q: np.ndarray) -> np.ndarray:
    """Replace Q by the nearest matrix with exactly orthonormal columns."""
    if Q.shape[1] == 0:
        return Q
    w, V = np.linalg.eigh(herm(Q) @ Q)
    w = np.clip(w, 1e-30, None)
    return Q @ ((V / np.sqrt(w)) @ herm(V))


def _complete_basis(Q: np.ndarray, dim: int) -> np.ndarray:
    """Extend orthonormal columns Q to an orthonormal basis of C^dim.

    Candidates are the standard basis vectors, picked greedily by residual
    norm, so the completion is deterministic and equals the identity when
    Q is empty.
    """
    cols = [Q[:, j].copy() for j in range(Q.shape[1])]
    cand = np.eye(dim, dtype=complex)
    while len(cols) < dim:
        best, best_norm = None, 0.0
        for k in range(dim):
            r = cand[:, k].copy()
            for q in cols:
                r -= np.vdot(q, r) * q
            nrm = float(np.linalg.norm(r))
            if nrm > best_norm:
                best, best_norm = r / nrm, nrm
        if best is None:  # pragma: no cover - cannot happen for consistent Q
            raise DimensionError("failed to complete orthonormal basis")
        # One re-orthogonalization pass for stability.
        for q in cols:
            best -= np.vdot(q, best) * q
        best /= np.linalg.norm(best)
        cols.append(best)
    return np.array(cols).T


def extend_isometry(
    xs: Sequence[np.ndarray],
    ys: Sequence[np.ndarray],
    dim_in: int | None = None,
    dim_out: int | None = None,
    tol: float = DEFAULT_TOL,
) -> np.ndarray:
    """Extend the partial map ``x_i -> y_i`` to an isometry of C^a into C^b.

    Requires ``b >= a`` and matching Gram matrices: ``<x_i, x_j> == <y_i, y_j>``
    within ``tol`` for all pairs.  The constraint vectors are orthonormalized
    by column-pivoted elimination at threshold ``tol`` (relative to the
    largest constraint norm) and both orthonormal families are completed to
    bases of their ambient spaces; the returned ``V`` (b x a) satisfies
    ``V* V = I`` and ``V x_i = y_i`` within ``10 * tol``.
    """
    xs = [np.asarray(x, dtype=complex).reshape(-1) for x in xs]
    ys = [np.asarray(y, dtype=complex).reshape(-1) for y in ys]
    if len(xs) != len(ys):
        raise DimensionError(f"{len(xs)} source vectors vs {len(ys)} targets")
    if xs:
        a = xs[0].size
        b = ys[0].size
        if dim_in is not None and dim_in != a:
            raise DimensionError(f"dim_in={dim_in} but vectors live in C^{a}")
        if dim_out is not None and dim_out != b:
            raise DimensionError(f"dim_out={dim_out} but vectors live in C^{b}")
    else:
        if dim_in is None or dim_out is None:
            raise DimensionError("empty constraint set needs explicit dim_in/dim_out")
        a, b = dim_in, dim_out
    if b < a:
        raise DimensionError(f"target dimension {b} smaller than source {a}")
    if any(x.size != a for x in xs) or any(y.size != b for y in ys):
        raise DimensionError("constraint vectors have inconsistent dimensions")

    X = np.array(xs).T if xs else np.zeros((a, 0), dtype=complex)
    Y = np.array(ys).T if ys else np.zeros((b, 0), dtype=complex)

    if xs:
        gx = herm(X) @ X
        gy = herm(Y) @ Y
        dev = max_abs(gx - gy)
        if dev > tol:
            raise GramMismatch(f"Gram matrices differ by {dev:.3e}", residual=dev)

    scale = max(1.0, max((float(np.linalg.norm(x)) for x in xs), default=1.0))
    qx, qy = _pivoted_orthonormalize(X, Y, tol * scale)
    qx_full = _complete_basis(qx, a)
    qy_ext = _complete_basis(qy, b)
    r = qx.shape[1]
    qy_full = np.hstack([qy, qy_ext[:, r : r + (a - r)]])
    V = qy_full @ herm(qx_full)

    if xs:
        dev = max(max_abs(V @ x - y) for x, y in zip(xs, ys))
        if dev > 10 * tol:
            raise GramMismatch(
                f"constraints not reproducible by an isometry (deviation {dev:.3e})",
                residual=dev,
            )
    return V
