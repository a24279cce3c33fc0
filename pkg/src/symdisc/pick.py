"""Matrix-valued Nevanlinna-Pick interpolation on the symmetrized bidisc.

The solver follows the lurking-isometry route: nodes are lifted to the
bidisc (both square-root orderings), the interpolation data is turned into
a positive-kernel feasibility problem (the Agler decomposition of
I - Psi(w)* Psi(z) restricted to the lifted nodes), a doubly-symmetric
unitary is extracted from the kernel factors, and the resulting Gram
identity yields an isometric colligation whose transfer function
interpolates the data and is iso-inner (or coiso-inner after passing to
the adjoint problem when the targets are wide).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionError,
    DomainError,
    GramMismatch,
    Infeasible,
    InterpolationResidual,
    NotContraction,
    Singular,
)
from .linalg import as_matrix, extend_isometry, gram_factor, herm, max_abs, op_norm
from .realization import Colligation, adjoint_tfr, eval_tfr, in_g, phi

DEFAULT_MAX_ITERS = 50_000
DEFAULT_FEAS_TOL = 1e-8
GRAM_TOL = 1e-7
INTERP_TOL = 1e-6
NODE_SEPARATION = 1e-12


@dataclass(frozen=True)
class PickProblem:
    """Interpolation data: nodes in the symmetrized bidisc, matrix targets.

    All targets share the shape (M, N) and have operator norm <= 1; nodes
    must be pairwise distinct interior points.
    """

    nodes: tuple[tuple[complex, complex], ...]
    targets: tuple[np.ndarray, ...]

    def __init__(self, nodes, targets):
        nodes = tuple((complex(s), complex(p)) for s, p in nodes)
        targets = tuple(as_matrix(t) for t in targets)
        if len(nodes) != len(targets):
            raise DimensionError(f"{len(nodes)} nodes but {len(targets)} targets")
        if not nodes:
            raise DimensionError("at least one node is required")
        shape = targets[0].shape
        for t in targets:
            if t.shape != shape:
                raise DimensionError(f"mixed target shapes {shape} and {t.shape}")
        for s, p in nodes:
            if not in_g(s, p):
                raise DomainError(f"node ({s}, {p}) outside the symmetrized bidisc")
        for i in range(len(nodes)):
            for j in range(i + 1, len(nodes)):
                if (
                    abs(nodes[i][0] - nodes[j][0]) <= NODE_SEPARATION
                    and abs(nodes[i][1] - nodes[j][1]) <= NODE_SEPARATION
                ):
                    raise DimensionError(f"nodes {i} and {j} coincide")
        for i, t in enumerate(targets):
            nrm = op_norm(t)
            if nrm > 1.0 + 1e-9:
                raise NotContraction(f"target {i} has norm {nrm:.6f}", residual=nrm - 1.0)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "targets", targets)

    @property
    def shape(self) -> tuple[int, int]:
        return self.targets[0].shape

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)


def lift_node(s: complex, p: complex) -> tuple[tuple[complex, complex], tuple[complex, complex]]:
    """Both bidisc preimages of a node: roots of t^2 - s t + p.

    Roots are ordered lexicographically by (real, imaginary) part so lifts
    are deterministic; the second member is the coordinate swap of the first.
    """
    if not in_g(s, p):
        raise DomainError(f"({s}, {p}) outside the symmetrized bidisc")
    r = np.roots([1.0, -s, p])
    r = sorted((complex(t) for t in r), key=lambda t: (t.real, t.imag))
    z = (r[0], r[1])
    return z, (r[1], r[0])


@dataclass(frozen=True)
class AglerCert:
    """Feasible Agler kernel pair over the lifted (sigma-closed) node set.

    ``nodes`` lists the collapsed lifted bidisc points; ``sigma[i]`` is the
    index of the coordinate swap of node i (itself for diagonal lifts);
    ``node_index[i]`` locates the preferred lift of original node i.
    ``F1``/``F2`` stack the per-node kernel factors columnwise, so node i
    occupies columns [i*N, (i+1)*N).
    """

    nodes: tuple[tuple[complex, complex], ...]
    sigma: tuple[int, ...]
    node_index: tuple[int, ...]
    targets: tuple[np.ndarray, ...]
    Gamma1: np.ndarray
    Gamma2: np.ndarray
    F1: np.ndarray
    F2: np.ndarray
    residual: float
    n_cols: int

    def f_blocks(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        N = self.n_cols
        return self.F1[:, i * N : (i + 1) * N], self.F2[:, i * N : (i + 1) * N]

    @property
    def ranks(self) -> tuple[int, int]:
        return self.F1.shape[0], self.F2.shape[0]


def _collapse_lifts(problem: PickProblem):
    """Lift every node to the bidisc, collapsing diagonal lifts z == z^sigma."""
    nodes: list[tuple[complex, complex]] = []
    sigma: list[int] = []
    targets: list[np.ndarray] = []
    node_index: list[int] = []
    for (s, p), A in zip(problem.nodes, problem.targets):
        z, zs = lift_node(s, p)
        i = len(nodes)
        node_index.append(i)
        if abs(z[0] - z[1]) <= NODE_SEPARATION:
            nodes.append(z)
            sigma.append(i)
            targets.append(A)
        else:
            nodes.append(z)
            nodes.append(zs)
            sigma.extend([i + 1, i])
            targets.extend([A, A])
    return nodes, sigma, targets, node_index


def _sigma_permutation(sigma: list[int], N: int) -> np.ndarray:
    perm = np.empty(len(sigma) * N, dtype=int)
    for i, si in enumerate(sigma):
        perm[i * N : (i + 1) * N] = np.arange(si * N, (si + 1) * N)
    return perm


def _project_psd(M: np.ndarray) -> np.ndarray:
    H = (M + herm(M)) / 2.0
    w, V = np.linalg.eigh(H)
    w = np.clip(w, 0.0, None)
    return (V * w) @ herm(V)


def _dykstra_phase(a, b, G, denom, perm, max_iters, tol):
    """Dykstra-corrected alternating projections onto {Agler identity,
    sigma-paired} (affine) and the PSD cone.

    Returns (g1, g2, residual): the last PSD iterates and their affine
    violation.  The affine step lands exactly on the identity set and the
    sigma-paired subspace; the correction term lives on the cone side.
    """

    def project_affine(g1, g2):
        err = (a * g1 + b * g2 - G) / denom
        g1 = g1 - np.conj(a) * err
        g2 = g2 - np.conj(b) * err
        # Averaging over (g1, g2) -> (P g2 P, P g1 P) enforces the pairing
        # and preserves the identity because the constraint set is invariant
        # under the lift swap.
        s1 = g2[np.ix_(perm, perm)]
        s2 = g1[np.ix_(perm, perm)]
        return (g1 + s1) / 2.0, (g2 + s2) / 2.0

    g1 = np.zeros_like(G)
    g2 = np.zeros_like(G)
    g1, g2 = project_affine(g1, g2)
    e1 = np.zeros_like(g1)
    e2 = np.zeros_like(g2)
    s1, s2 = g1, g2
    residual = max_abs(a * s1 + b * s2 - G)
    check_every = 20
    for it in range(1, max_iters + 1):
        y1, y2 = g1 + e1, g2 + e2
        s1, s2 = _project_psd(y1), _project_psd(y2)
        e1, e2 = y1 - s1, y2 - s2
        g1, g2 = project_affine(s1, s2)
        if it % check_every == 0 or it == max_iters:
            residual = max_abs(a * s1 + b * s2 - G)
            if residual <= tol:
                break
    return s1, s2, float(residual)


def _gauss_newton_rank(L0, a, b, G, perm, tol, max_iter):
    """Levenberg-Marquardt refinement of the sigma-paired kernel factor.

    Minimizes the max-entry residual of  a . (L*L) + b . P(L*L)P - G  over
    the factor L (rank x dim, complex), treating real and imaginary parts
    as independent real unknowns.  Returns (L, residual).
    """
    n = G.shape[0]
    r = L0.shape[0]
    L = L0.copy()

    def resid_mat(L):
        g = herm(L) @ L
        return a * g + b * g[np.ix_(perm, perm)] - G

    def vec(R):
        return np.concatenate([R.real.ravel(), R.imag.ravel()])

    R = resid_mat(L)
    best = max_abs(R)
    lam = 1e-4
    since_drop = 0
    for _ in range(max_iter):
        if best <= 0.2 * tol:
            break
        if since_drop >= 10:
            break  # stalled: no meaningful progress over the last sweeps
        J = np.empty((2 * n * n, 2 * r * n))
        col = 0
        for q in range(r):
            Lq = L[q, :]
            cLq = np.conj(Lq)
            for c in range(n):
                for im in (False, True):
                    dg = np.zeros((n, n), dtype=complex)
                    if im:
                        dg[c, :] -= 1j * Lq
                        dg[:, c] += 1j * cLq
                    else:
                        dg[c, :] += Lq
                        dg[:, c] += cLq
                    dR = a * dg + b * dg[np.ix_(perm, perm)]
                    J[:, col] = np.concatenate([dR.real.ravel(), dR.imag.ravel()])
                    col += 1
        rv = vec(R)
        improved = False
        for _ in range(8):
            Jl = np.vstack([J, np.sqrt(lam) * np.eye(2 * r * n)])
            rhs = np.concatenate([-rv, np.zeros(2 * r * n)])
            delta = np.linalg.lstsq(Jl, rhs, rcond=None)[0]
            step = delta.reshape(r, n, 2)
            Lnew = L + step[:, :, 0] + 1j * step[:, :, 1]
            Rnew = resid_mat(Lnew)
            if max_abs(Rnew) < best:
                since_drop = 0 if max_abs(Rnew) < 0.7 * best else since_drop + 1
                L, R, best = Lnew, Rnew, max_abs(Rnew)
                lam = max(lam * 0.3, 1e-12)
                improved = True
                break
            lam *= 5.0
        if not improved:
            break
    return L, best


def solve_agler_feasibility(
    problem: PickProblem,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_FEAS_TOL,
) -> AglerCert:
    """Find PSD kernels Gamma1, Gamma2 satisfying the blockwise identity

        I - A_i* A_j = (1 - conj(z_i1) z_j1) Gamma1[i, j]
                     + (1 - conj(z_i2) z_j2) Gamma2[i, j]

    over the sigma-closed lifted node set.  A Dykstra-corrected alternating
    projection sweep between the affine identity set (intersected with the
    sigma-paired subspace) and the PSD cone supplies a global iterate; if
    its residual is still above ``tol`` the kernel is polished by damped
    Gauss-Newton on the paired low-rank factor Gamma1 = L*L,
    Gamma2 = P Gamma1 P, escalating the rank until the identity holds.
    Raises Infeasible when every attempt plateaus above ``tol``.
    """
    nodes, sigma, targets, node_index = _collapse_lifts(problem)
    m = len(nodes)
    N = problem.shape[1]
    dim = m * N

    # Blockwise data, expanded to entrywise coefficient matrices.
    eyeN = np.eye(N, dtype=complex)
    G = np.zeros((dim, dim), dtype=complex)
    a = np.zeros((dim, dim), dtype=complex)
    b = np.zeros((dim, dim), dtype=complex)
    ones = np.ones((N, N))
    for i in range(m):
        for j in range(m):
            bi, bj = slice(i * N, (i + 1) * N), slice(j * N, (j + 1) * N)
            G[bi, bj] = eyeN - herm(targets[i]) @ targets[j]
            a[bi, bj] = (1.0 - np.conj(nodes[i][0]) * nodes[j][0]) * ones
            b[bi, bj] = (1.0 - np.conj(nodes[i][1]) * nodes[j][1]) * ones
    denom = np.abs(a) ** 2 + np.abs(b) ** 2
    perm = _sigma_permutation(sigma, N)

    def build_cert(F1, F2, g1, g2):
        residual = max_abs(a * (herm(F1) @ F1) + b * (herm(F2) @ F2) - G)
        return AglerCert(
            nodes=tuple(nodes),
            sigma=tuple(sigma),
            node_index=tuple(node_index),
            targets=tuple(targets),
            Gamma1=g1,
            Gamma2=g2,
            F1=F1,
            F2=F2,
            residual=float(residual),
            n_cols=N,
        )

    # Rank-0 shortcut: unimodular data has a vanishing kernel.
    if max_abs(G) <= tol:
        F = np.zeros((0, dim), dtype=complex)
        Z = np.zeros((dim, dim), dtype=complex)
        return build_cert(F, F, Z, Z)

    phase1_budget = min(max_iters, 4000 if dim <= 8 else 1200)
    g1, g2, residual = _dykstra_phase(a, b, G, denom, perm, phase1_budget, tol)

    # Local polish: spectral initialization from the projection iterate,
    # escalating the factor rank (warm-started) until the identity is met.
    w, V = np.linalg.eigh((g1 + herm(g1)) / 2.0)
    w = np.clip(w[::-1], 0.0, None)
    V = V[:, ::-1]
    gn_iters = 120

    def seed_row(L):
        gam = herm(L) @ L
        R = a * gam + b * gam[np.ix_(perm, perm)] - G
        wr, Vr = np.linalg.eigh(-(R + herm(R)) / 2.0)
        v = Vr[:, -1]
        return 0.05 * max(np.sqrt(max(wr[-1], 0.0)), 1e-3) * np.conj(v)[None, :]

    best_residual = residual
    stalls = 0
    L_sol = None
    L_warm = None
    for r in range(1, dim + 1):
        if L_warm is None:
            L0 = (np.sqrt(w[:r])[:, None] * herm(V[:, :r])).astype(complex)
            if w[r - 1] <= 1e-12:
                L0[r - 1, :] = 1e-3
        else:
            L0 = np.vstack([L_warm, seed_row(L_warm)])
        L, res = _gauss_newton_rank(L0, a, b, G, perm, tol, gn_iters)
        L_warm = L
        if res <= tol:
            L_sol = L
            break
        if res >= 0.5 * best_residual:
            stalls += 1
        else:
            stalls = 0
        best_residual = min(best_residual, res)
        if stalls >= 3 and r >= 3:
            break

    if L_sol is None:
        raise Infeasible(
            f"Agler feasibility residual {best_residual:.3e} "
            f"(projection phase {residual:.3e}) did not reach tol={tol:.1e}",
            residual=float(best_residual),
        )

    # Rank reduction: retry with one factor row fewer (seeded by the SVD
    # truncation of the solution) while the identity still holds.
    while L_sol.shape[0] > 1:
        r = L_sol.shape[0] - 1
        U, S, Vh = np.linalg.svd(L_sol, full_matrices=False)
        L0 = S[:r, None] * Vh[:r, :]
        L, res = _gauss_newton_rank(L0, a, b, G, perm, tol, gn_iters)
        if res <= tol:
            L_sol = L
        else:
            break

    F1 = L_sol
    F2 = L_sol[:, perm]
    return build_cert(F1, F2, herm(F1) @ F1, herm(F2) @ F2)


def build_doubly_symmetric_tau(cert: AglerCert, tol: float = GRAM_TOL):
    """Extract the doubly-symmetric unitary and the kernel factor on the bidisc.

    The unitary adjoint is pinned on the difference vectors

        [F1(z) - F1(z^s); F2(z^s) - F2(z)] xi
            |-> [z1 F1(z) - z2 F1(z^s); z1 F2(z^s) - z2 F2(z)] xi

    (completed deterministically on the orthocomplement), after which

        F'(z) = (tau* - z2 I)^{-1} [F1(z); F2(z^s)]
        F(z1 + z2, z1 z2) = (I - (z1 + z2)/2 tau) F'(z).

    Returns (tau, fs) where fs[i] is the (d1+d2) x N factor at lifted node i
    (averaged over the two lifts, which agree up to the certificate residual).
    """
    d1, d2 = cert.ranks
    d = d1 + d2
    N = cert.n_cols
    m = len(cert.nodes)
    if d == 0:
        tau = np.zeros((0, 0), dtype=complex)
        return tau, [np.zeros((0, N), dtype=complex) for _ in range(m)]

    xs, ys = [], []
    for i, (z1, z2) in enumerate(cert.nodes):
        f1, f2 = cert.f_blocks(i)
        f1s, f2s = cert.f_blocks(cert.sigma[i])
        u = np.vstack([f1 - f1s, f2s - f2])
        v = np.vstack([z1 * f1 - z2 * f1s, z1 * f2s - z2 * f2])
        for k in range(N):
            xs.append(u[:, k])
            ys.append(v[:, k])
    tau_star = extend_isometry(xs, ys, dim_in=d, dim_out=d, tol=tol)
    tau = herm(tau_star)

    eye = np.eye(d, dtype=complex)
    fprime = [None] * m
    for i, (z1, z2) in enumerate(cert.nodes):
        f1, _ = cert.f_blocks(i)
        _, f2s = cert.f_blocks(cert.sigma[i])
        M = tau_star - z2 * eye
        cond = np.linalg.cond(M)
        if not np.isfinite(cond) or cond > 1e12:
            raise Singular(f"tau* - z2 I singular at lifted node {i}")
        fprime[i] = np.linalg.solve(M, np.vstack([f1, f2s]))
    fs = []
    for i, (z1, z2) in enumerate(cert.nodes):
        fp = (fprime[i] + fprime[cert.sigma[i]]) / 2.0
        fs.append((eye - 0.5 * (z1 + z2) * tau) @ fp)
    return tau, fs


def condition_solv_residual(
    problem: PickProblem, tau: np.ndarray, fs: list[np.ndarray]
) -> float:
    """Max deviation in the Gram identity

        I + F_i* phi_i* phi_j F_j = A_i* A_j + F_i* F_j

    over all node pairs (fs aligned with problem.nodes)."""
    phis = [phi(tau, s, p) for s, p in problem.nodes]
    dev = 0.0
    eyeN = np.eye(problem.shape[1], dtype=complex)
    for i in range(problem.n_nodes):
        for j in range(problem.n_nodes):
            lhs = eyeN + herm(fs[i]) @ herm(phis[i]) @ phis[j] @ fs[j]
            rhs = herm(problem.targets[i]) @ problem.targets[j] + herm(fs[i]) @ fs[j]
            dev = max(dev, max_abs(lhs - rhs))
    return dev


def lurking_isometry(
    problem: PickProblem,
    tau: np.ndarray,
    fs: list[np.ndarray],
    tol: float = GRAM_TOL,
) -> Colligation:
    """Build the isometric colligation from the lurking-isometry pairs

        [xi; phi(tau, lam_i) F_i xi]  |->  [A_i xi; F_i xi].

    Requires M >= N and the Gram identity (checked within ``tol``); the
    partial isometry is completed deterministically to V: C^N + C^d ->
    C^M + C^d and returned with the given tau.
    """
    M, N = problem.shape
    if M < N:
        raise DimensionError(f"lurking isometry needs M >= N, got {M} x {N}")
    d = tau.shape[0]
    dev = condition_solv_residual(problem, tau, fs)
    if dev > tol:
        raise GramMismatch(f"solvability Gram identity off by {dev:.3e}", residual=dev)

    xs, ys = [], []
    for (s, p), A, F in zip(problem.nodes, problem.targets, fs):
        ph = phi(tau, s, p)
        for k in range(N):
            xi = np.zeros(N, dtype=complex)
            xi[k] = 1.0
            xs.append(np.concatenate([xi, ph @ F @ xi]))
            ys.append(np.concatenate([A @ xi, F @ xi]))
    V = extend_isometry(xs, ys, dim_in=N + d, dim_out=M + d, tol=10 * tol)
    return Colligation(tau=tau, A=V[:M, :N], B=V[:M, N:], C=V[M:, :N], D=V[M:, N:])


def interpolation_residual(problem: PickProblem, V: Colligation) -> float:
    """Max-entry deviation of the transfer function from the targets."""
    dev = 0.0
    for (s, p), A in zip(problem.nodes, problem.targets):
        dev = max(dev, max_abs(eval_tfr(V, s, p) - A))
    return dev


def solve_pick(
    problem: PickProblem,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_FEAS_TOL,
    gram_tol: float = GRAM_TOL,
    interp_tol: float = INTERP_TOL,
) -> Colligation:
    """Solve the Pick problem with a rational iso- or coiso-inner function.

    Tall or square targets (M >= N) take the iso-inner route directly; wide
    targets are handled by solving the adjoint problem (conjugate nodes,
    adjoint targets) and transposing the realization, which yields a
    coiso-inner interpolant.  The returned colligation is isometric and its
    transfer function matches every target within ``interp_tol``.
    """
    M, N = problem.shape
    if N > M:
        adj = PickProblem(
            nodes=[(np.conj(s), np.conj(p)) for s, p in problem.nodes],
            targets=[herm(A) for A in problem.targets],
        )
        sol = solve_pick(adj, max_iters=max_iters, tol=tol, gram_tol=gram_tol, interp_tol=interp_tol)
        return adjoint_tfr(sol)

    cert = solve_agler_feasibility(problem, max_iters=max_iters, tol=tol)
    tau, fs_lifted = build_doubly_symmetric_tau(cert, tol=gram_tol)
    fs = [fs_lifted[i] for i in cert.node_index]
    V = lurking_isometry(problem, tau, fs, tol=gram_tol)
    dev = interpolation_residual(problem, V)
    if dev > interp_tol:
        raise InterpolationResidual(
            f"interpolation residual {dev:.3e} exceeds {interp_tol:.1e}", residual=dev
        )
    return V
