"""Sparse multivariate polynomials and the two reflection calculi.

``MultiPoly`` stores a map exponent-vector -> complex coefficient.  On top
of the arithmetic this module provides the polydisc reflection (z^n times
the conjugate-reciprocal), the symmetrized-polydisc reflection, the
symmetrization map pi_d and rewriting of symmetric polynomials in
elementary symmetric coordinates.

Convention: polynomials on the symmetrized polydisc use the variable order
(s_1, ..., s_{d-1}, p) with p last.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from .errors import DegreeError, DimensionError, NotSymmetric

PRUNE_TOL = 1e-14


class MultiPoly:
    """Sparse polynomial in ``dim`` complex variables.

    Terms are stored as ``{exponent tuple: coefficient}``; coefficients with
    modulus <= 1e-14 are pruned on construction so equality is coefficientwise.

    >>> f = MultiPoly(2, {(0, 0): 2, (1, 0): -1})   # 2 - z1
    >>> f(np.array([0.5, 0.0]))
    (1.5+0j)
    """

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping[tuple, complex] | None = None):
        if dim < 1:
            raise DimensionError("polynomial needs at least one variable")
        self.dim = int(dim)
        clean: dict[tuple[int, ...], complex] = {}
        for exp, coef in (terms or {}).items():
            e = tuple(int(k) for k in exp)
            if len(e) != dim:
                raise DimensionError(f"exponent {e} has length {len(e)}, expected {dim}")
            if any(k < 0 for k in e):
                raise DegreeError(f"negative exponent in {e}")
            c = complex(coef)
            if abs(c) > PRUNE_TOL:
                clean[e] = clean.get(e, 0.0) + c
                if abs(clean[e]) <= PRUNE_TOL:
                    del clean[e]
        self.terms = clean

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, dim: int) -> "MultiPoly":
        return cls(dim, {})

    @classmethod
    def constant(cls, dim: int, c: complex) -> "MultiPoly":
        return cls(dim, {tuple([0] * dim): c})

    @classmethod
    def monomial(cls, dim: int, exp: Iterable[int], c: complex = 1.0) -> "MultiPoly":
        return cls(dim, {tuple(exp): c})

    @classmethod
    def variable(cls, dim: int, j: int) -> "MultiPoly":
        e = [0] * dim
        e[j] = 1
        return cls(dim, {tuple(e): 1.0})

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.dim != self.dim:
                raise DimensionError(f"mixing dims {self.dim} and {other.dim}")
            return other
        return MultiPoly.constant(self.dim, complex(other))

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0.0) + c
        return MultiPoly(self.dim, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.dim, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        out: dict[tuple[int, ...], complex] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0.0) + c1 * c2
        return MultiPoly(self.dim, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise DegreeError("negative power")
        out = MultiPoly.constant(self.dim, 1.0)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    __hash__ = None

    def allclose(self, other: "MultiPoly", tol: float = 1e-12) -> bool:
        """Coefficientwise comparison within tol."""
        if self.dim != other.dim:
            return False
        for e in set(self.terms) | set(other.terms):
            if abs(self.terms.get(e, 0.0) - other.terms.get(e, 0.0)) > tol:
                return False
        return True

    # -- queries -------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> tuple[int, ...]:
        """Coordinatewise max exponent vector; all zeros for the zero poly."""
        if not self.terms:
            return tuple([0] * self.dim)
        return tuple(max(e[j] for e in self.terms) for j in range(self.dim))

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def conj_coeffs(self) -> "MultiPoly":
        """Polynomial with conjugated coefficients (same exponents)."""
        return MultiPoly(self.dim, {e: np.conj(c) for e, c in self.terms.items()})

    def permute_vars(self, perm: Iterable[int]) -> "MultiPoly":
        """Apply a variable permutation: new variable j is old variable perm[j]."""
        perm = tuple(perm)
        return MultiPoly(self.dim, {tuple(e[perm[j]] for j in range(self.dim)): c for e, c in self.terms.items()})

    # -- evaluation ----------------------------------------------------
    def __call__(self, z) -> complex:
        return poly_eval(self, z)

    def eval_many(self, zs: np.ndarray) -> np.ndarray:
        """Evaluate at a batch of points, shape (n, dim) -> (n,)."""
        zs = np.asarray(zs, dtype=complex)
        if zs.ndim != 2 or zs.shape[1] != self.dim:
            raise DimensionError(f"expected points of shape (n, {self.dim})")
        out = np.zeros(zs.shape[0], dtype=complex)
        for e, c in self.terms.items():
            mono = np.ones(zs.shape[0], dtype=complex)
            for j, k in enumerate(e):
                if k:
                    mono *= zs[:, j] ** k
            out += c * mono
        return out

    def __repr__(self) -> str:
        if not self.terms:
            return f"MultiPoly({self.dim}, 0)"
        bits = []
        for e in sorted(self.terms):
            bits.append(f"{self.terms[e]:.6g}*z^{e}")
        return f"MultiPoly({self.dim}, {' + '.join(bits)})"


def poly_eval(f: MultiPoly, z) -> complex:
    """Evaluate ``f`` at a point of C^dim by monomial summation."""
    z = np.asarray(z, dtype=complex).reshape(-1)
    if z.size != f.dim:
        raise DimensionError(f"point has {z.size} coordinates, polynomial has {f.dim}")
    total = 0.0 + 0.0j
    for e, c in f.terms.items():
        mono = c
        for zj, k in zip(z, e):
            if k:
                mono *= zj**k
        total += mono
    return complex(total)


def reflect_polydisc(f: MultiPoly, n: Iterable[int]) -> MultiPoly:
    """Polydisc reflection: the monomial c*z^a maps to conj(c)*z^(n-a).

    ``n`` must dominate the degree of ``f`` coordinatewise; the result is the
    polynomial z^n * conj(f(1/conj(z))).
    """
    n = tuple(int(k) for k in n)
    if len(n) != f.dim:
        raise DimensionError(f"degree vector length {len(n)} != dim {f.dim}")
    deg = f.degree()
    if any(d > nk for d, nk in zip(deg, n)):
        raise DegreeError(f"degree {deg} exceeds reflection degree {n}")
    return MultiPoly(f.dim, {tuple(nk - a for nk, a in zip(n, e)): np.conj(c) for e, c in f.terms.items()})


def reflect_G(xi: MultiPoly, k: int) -> MultiPoly:
    """Reflection on the symmetrized polydisc.

    In variables (s_1, ..., s_{d-1}, p) the monomial
    c * s_1^{a_1} ... s_{d-1}^{a_{d-1}} * p^{a_d} maps to
    conj(c) * s_1^{a_{d-1}} ... s_{d-1}^{a_1} * p^{k - (a_1+...+a_d)},
    which realizes p^k * conj(xi(conj(s_{d-1})/conj(p), ..., 1/conj(p)))
    as a polynomial.  Requires ``k`` >= total degree of ``xi``.
    """
    if k < xi.total_degree():
        raise DegreeError(f"k={k} below total degree {xi.total_degree()}")
    d = xi.dim
    out: dict[tuple[int, ...], complex] = {}
    for e, c in xi.terms.items():
        s_part = e[: d - 1]
        new_e = tuple(reversed(s_part)) + (k - sum(e),)
        out[new_e] = out.get(new_e, 0.0) + np.conj(c)
    return MultiPoly(d, out)


def sym_point(z) -> tuple[complex, ...]:
    """Elementary symmetric values (pi_d): (sum z_j, sum_{i<j} z_i z_j, ..., prod z_j)."""
    z = np.asarray(z, dtype=complex).reshape(-1)
    d = z.size
    # np.poly returns [1, -e1, e2, -e3, ...]
    coeffs = np.poly(z)
    return tuple(complex((-1) ** j * coeffs[j]) for j in range(1, d + 1))


def elementary_polys(d: int) -> list[MultiPoly]:
    """The d elementary symmetric polynomials e_1, ..., e_d in z_1..z_d."""
    out = []
    for k in range(1, d + 1):
        terms = {}
        for idx in combinations(range(d), k):
            e = [0] * d
            for j in idx:
                e[j] = 1
            terms[tuple(e)] = 1.0
        out.append(MultiPoly(d, terms))
    return out


def is_symmetric(f: MultiPoly, tol: float = 1e-12) -> bool:
    """True iff f is invariant under every adjacent transposition, coefficientwise."""
    for j in range(f.dim - 1):
        perm = list(range(f.dim))
        perm[j], perm[j + 1] = perm[j + 1], perm[j]
        if not f.allclose(f.permute_vars(perm), tol):
            return False
    return True


def symmetric_to_elementary(f: MultiPoly, tol: float = 1e-12) -> MultiPoly:
    """Rewrite a symmetric polynomial in elementary symmetric coordinates.

    Returns g with g(e_1(z), ..., e_d(z)) = f(z), by the classical
    lexicographic leading-term reduction.  The output lives in the variables
    (s_1, ..., s_{d-1}, p).  Raises NotSymmetric if the input is not
    symmetric or a reduction step leaves an asymmetric remainder.
    """
    if not is_symmetric(f, tol):
        raise NotSymmetric("input polynomial is not symmetric")
    d = f.dim
    elem = elementary_polys(d)
    rem = f
    g_terms: dict[tuple[int, ...], complex] = {}
    max_steps = 4 * (len(f.terms) + 1) * (f.total_degree() + 2) ** d
    for _ in range(max_steps):
        if rem.is_zero:
            return MultiPoly(d, g_terms)
        lead = max(rem.terms)  # lexicographic on exponent tuples
        c = rem.terms[lead]
        if any(lead[j] < lead[j + 1] for j in range(d - 1)):
            raise NotSymmetric(f"asymmetric remainder with leading term {lead}")
        powers = [lead[j] - lead[j + 1] for j in range(d - 1)] + [lead[d - 1]]
        g_terms[tuple(powers)] = g_terms.get(tuple(powers), 0.0) + c
        sub = MultiPoly.constant(d, c)
        for ek, pk in zip(elem, powers):
            if pk:
                sub = sub * ek**pk
        rem = rem - sub
    raise NotSymmetric("reduction failed to terminate")  # pragma: no cover


def companion_roots(coords) -> np.ndarray:
    """Roots of z^d - s_1 z^{d-1} + s_2 z^{d-2} - ... + (-1)^d p.

    ``coords`` is a point (s_1, ..., s_{d-1}, p); the roots are the fiber of
    the symmetrization map over that point.
    """
    coords = np.asarray(coords, dtype=complex).reshape(-1)
    d = coords.size
    poly = np.concatenate([[1.0 + 0j], [(-1) ** j * coords[j - 1] for j in range(1, d + 1)]])
    return np.roots(poly)


def in_gd(coords, margin: float = 1e-12) -> bool:
    """Membership in the open symmetrized polydisc via the root test."""
    r = companion_roots(coords)
    if r.size == 0:
        return False
    return bool(np.max(np.abs(r)) < 1.0 - margin)


def in_gd_closure(coords, slack: float = 1e-9) -> bool:
    """Membership in the closed symmetrized polydisc (with numerical slack)."""
    r = companion_roots(coords)
    if r.size == 0:
        return False
    return bool(np.max(np.abs(r)) <= 1.0 + slack)
