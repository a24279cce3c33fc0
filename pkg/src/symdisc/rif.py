"""Scalar rational inner functions on the symmetrized polydisc.

A function here is determined by (k, tau, xi): tau unimodular, xi a
polynomial in (s_1, ..., s_{d-1}, p) with no zero in the domain, and

    f = tau * reflect_G(xi, k) / xi.

Zero-freeness of xi is checked by randomized domain sampling, not
certified.  The module also provides the domain and distinguished-boundary
samplers used throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegreeError, PoleHit, UnimodularityError, ZeroInDomain
from .sympoly import MultiPoly, reflect_G, sym_point

POLE_TOL = 1e-13
BOUNDARY_SKIP_TOL = 1e-10


def rng_from_seed(seed: int) -> np.random.Generator:
    """Counter-based generator (Philox) so all sampling is reproducible."""
    return np.random.Generator(np.random.Philox(int(seed)))


def sample_torus(d: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points of the d-torus, shape (count, d)."""
    theta = rng.uniform(0.0, 2.0 * np.pi, size=(count, d))
    return np.exp(1j * theta)


def sample_polydisc(d: int, count: int, rng: np.random.Generator, radius: float = 1.0) -> np.ndarray:
    """Area-uniform points of (radius * D)^d, shape (count, d)."""
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, size=(count, d)))
    theta = rng.uniform(0.0, 2.0 * np.pi, size=(count, d))
    return r * np.exp(1j * theta)


def _symmetrize_batch(zs: np.ndarray) -> np.ndarray:
    return np.array([sym_point(z) for z in zs], dtype=complex)


def sample_bGd(d: int, count: int, seed: int) -> np.ndarray:
    """Points of the distinguished boundary: pi_d applied to torus samples.

    Every row satisfies |p| = 1 and s_j = conj(s_{d-j}) * p.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    return _symmetrize_batch(sample_torus(d, count, rng_from_seed(seed)))


def sample_Gd(d: int, count: int, seed: int, radius: float = 1.0) -> np.ndarray:
    """Interior samples: pi_d of independent disc points (uniform |z|^2, uniform angle)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    return _symmetrize_batch(sample_polydisc(d, count, rng_from_seed(seed), radius))


@dataclass(frozen=True)
class RationalInnerFn:
    """Rational inner function on the symmetrized d-disc.

    Attributes
    ----------
    d : number of underlying disc variables (the function lives on G_d in C^d).
    k : reflection exponent, at least the total degree of xi.
    tau : unimodular scalar factor.
    xi : denominator polynomial in (s_1, ..., s_{d-1}, p).
    numerator : cached reflection reflect_G(xi, k).
    """

    d: int
    k: int
    tau: complex
    xi: MultiPoly
    numerator: MultiPoly = field(init=False)

    def __post_init__(self):
        if abs(abs(self.tau) - 1.0) > 1e-12:
            raise UnimodularityError(f"|tau| = {abs(self.tau):.12f}")
        if self.xi.dim != self.d:
            raise DegreeError(f"xi has {self.xi.dim} variables, expected {self.d}")
        object.__setattr__(self, "numerator", reflect_G(self.xi, self.k))

    def __call__(self, w) -> complex:
        return eval_rif(self, w)


def build_rif(
    xi: MultiPoly,
    k: int,
    tau: complex = 1.0,
    samples: int = 10_000,
    seed: int = 0,
) -> RationalInnerFn:
    """Construct the inner function tau * reflect_G(xi, k) / xi.

    Rejects xi if any of ``samples`` random domain points puts |xi| <= 1e-12
    (zero detected in the domain, so the quotient would not be holomorphic).
    """
    if abs(abs(complex(tau)) - 1.0) > 1e-12:
        raise UnimodularityError(f"|tau| = {abs(complex(tau)):.12f}")
    if k < xi.total_degree():
        raise DegreeError(f"k={k} below total degree {xi.total_degree()}")
    if samples > 0:
        pts = sample_Gd(xi.dim, samples, seed)
        vals = np.abs(xi.eval_many(pts))
        j = int(np.argmin(vals))
        if vals[j] <= 1e-12:
            raise ZeroInDomain(f"xi vanishes at sampled domain point {pts[j]}")
    return RationalInnerFn(d=xi.dim, k=int(k), tau=complex(tau), xi=xi)


def eval_rif(f: RationalInnerFn, w) -> complex:
    """Evaluate tau * numerator(w) / xi(w); PoleHit near a zero of xi."""
    den = f.xi(w)
    if abs(den) <= POLE_TOL:
        raise PoleHit(f"|xi(w)| = {abs(den):.3e} at w = {w}")
    return f.tau * f.numerator(w) / den


def check_inner(f: RationalInnerFn, count: int = 1000, seed: int = 0) -> float:
    """Max of ||f| - 1| over sampled boundary points, skipping near-poles.

    Boundary points within 1e-10 of a zero of xi are skipped, consistent
    with inner functions being unimodular only almost everywhere.
    """
    pts = sample_bGd(f.d, count, seed)
    dens = f.xi.eval_many(pts)
    nums = f.numerator.eval_many(pts)
    keep = np.abs(dens) > BOUNDARY_SKIP_TOL
    if not np.any(keep):
        return 0.0
    vals = np.abs(f.tau * nums[keep] / dens[keep])
    return float(np.max(np.abs(vals - 1.0)))
