"""Caratheodory-type approximation on the symmetrized bidisc.

Given a Schur-class target (a colligation or a black-box evaluator), build
nested interpolation problems along a deterministic dense node sequence,
solve each with the Pick solver and record the sup deviation from the
target on a compact test grid.  Convergence of the deviation sequence is
reported, not asserted stagewise: the underlying compactness argument only
guarantees subsequential limits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import NotContraction
from .linalg import as_matrix, op_norm
from .pick import PickProblem, solve_pick
from .realization import Colligation, eval_tfr
from .rif import sample_polydisc
from .sympoly import sym_point

# Positive root of x^5 = x + 1; its inverse powers drive the additive
# low-discrepancy recurrence in four dimensions.
_PLASTIC4 = 1.1673039782614187


def _kronecker_alpha(dims: int) -> np.ndarray:
    return np.array([_PLASTIC4 ** -(j + 1) for j in range(dims)])


def dense_bidisc_sequence(count: int, seed: int) -> np.ndarray:
    """First ``count`` points of a deterministic dense sequence in the bidisc.

    An additive (Kronecker) recurrence with plastic-constant increments on
    [0, 1)^4 is mapped to the bidisc coordinatewise via (sqrt(u), angle);
    the seed fixes the starting offset.
    """
    alpha = _kronecker_alpha(4)
    offset = np.random.Generator(np.random.Philox(int(seed))).uniform(size=4)
    n = np.arange(1, count + 1)[:, None]
    u = np.mod(offset[None, :] + n * alpha[None, :], 1.0)
    z1 = np.sqrt(u[:, 0]) * np.exp(2j * np.pi * u[:, 1])
    z2 = np.sqrt(u[:, 2]) * np.exp(2j * np.pi * u[:, 3])
    return np.column_stack([z1, z2])


def dense_g_sequence(count: int, seed: int) -> list[tuple[complex, complex]]:
    """Dense node sequence in the symmetrized bidisc (image of the above)."""
    return [tuple(sym_point(z)) for z in dense_bidisc_sequence(count, seed)]


TargetFn = Callable[[complex, complex], np.ndarray]


def _as_evaluator(target) -> TargetFn:
    if isinstance(target, Colligation):
        return lambda s, p: eval_tfr(target, s, p)
    if callable(target):
        return lambda s, p: as_matrix(target(s, p))
    raise TypeError("target must be a Colligation or a callable (s, p) -> matrix")


@dataclass
class ApproxRun:
    """Record of one approximation run: node counts, interpolants, deviations."""

    stage_nodes: list[int]
    deviations: list[float]
    interpolants: list[Colligation]
    grid: np.ndarray = field(repr=False)

    def report(self) -> dict:
        return {
            "stages": [
                {"nodes": n, "sup_dev": d}
                for n, d in zip(self.stage_nodes, self.deviations)
            ]
        }


def caratheodory_sequence(
    target,
    stages: int = 4,
    nodes_per_stage: int = 2,
    grid_size: int = 50,
    seed: int = 7,
    radius: float = 0.7,
    tol: float = 1e-9,
    max_iters: int = 50_000,
) -> ApproxRun:
    """Approximate a Schur-class target by rational iso-/coiso-inner functions.

    Stage n interpolates the target at the first n * nodes_per_stage points
    of the seeded dense sequence and records the sup operator-norm deviation
    over a compact grid of radius ``radius`` (< 1).  Infeasibility from the
    Pick solver propagates: it cannot occur for a genuine Schur-class target
    and indicates a solver-quality incident.
    """
    if not 0 < radius < 1:
        raise ValueError("radius must lie in (0, 1)")
    evaluate = _as_evaluator(target)

    grid_rng = np.random.Generator(np.random.Philox(int(seed)).jumped(1))
    grid_z = sample_polydisc(2, grid_size, grid_rng, radius=radius)
    grid = np.array([sym_point(z) for z in grid_z], dtype=complex)

    target_vals = [evaluate(complex(s), complex(p)) for s, p in grid]
    worst = max(op_norm(v) for v in target_vals)
    if worst > 1.0 + 1e-9:
        raise NotContraction(f"target norm {worst:.6f} on the grid exceeds 1", residual=worst - 1.0)

    all_nodes = dense_g_sequence(stages * nodes_per_stage, seed)
    stage_nodes: list[int] = []
    deviations: list[float] = []
    interpolants: list[Colligation] = []
    for stage in range(1, stages + 1):
        n = stage * nodes_per_stage
        nodes = all_nodes[:n]
        targets = [evaluate(s, p) for s, p in nodes]
        problem = PickProblem(nodes, targets)
        V = solve_pick(problem, max_iters=max_iters, tol=tol)
        dev = max(
            op_norm(eval_tfr(V, complex(s), complex(p)) - tv)
            for (s, p), tv in zip(grid, target_vals)
        )
        stage_nodes.append(n)
        deviations.append(float(dev))
        interpolants.append(V)
    return ApproxRun(stage_nodes=stage_nodes, deviations=deviations, interpolants=interpolants, grid=grid)
