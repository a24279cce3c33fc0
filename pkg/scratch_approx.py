"""Scratch: does interpolating phi at many nodes reproduce phi globally?"""
import time

import numpy as np

from symdisc.pick import PickProblem, solve_agler_feasibility, solve_pick, interpolation_residual
from symdisc.realization import eval_tfr
from symdisc.rif import rng_from_seed, sample_Gd


def phi_scalar(s, p):
    return (2 * p - s) / (2 - s)


rng = rng_from_seed(42)
grid = sample_Gd(2, 50, 99, radius=0.7)

for n_nodes in (4, 6, 8, 10):
    zs = 0.75 * np.sqrt(rng.uniform(size=(n_nodes, 2))) * np.exp(2j * np.pi * rng.uniform(size=(n_nodes, 2)))
    nodes = [(z[0] + z[1], z[0] * z[1]) for z in zs]
    targets = [np.array([[phi_scalar(s, p)]]) for s, p in nodes]
    prob = PickProblem(nodes, targets)
    t0 = time.time()
    cert = solve_agler_feasibility(prob, tol=1e-9)
    V = solve_pick(prob, tol=1e-9)
    dev = max(abs(eval_tfr(V, complex(s), complex(p))[0, 0] - phi_scalar(s, p)) for s, p in grid)
    print(
        f"nodes={n_nodes}: ranks={cert.ranks} h={V.h} feas={cert.residual:.1e} "
        f"interp={interpolation_residual(prob, V):.1e} grid-dev={dev:.2e} ({time.time()-t0:.2f}s)"
    )

# same for 0.9*phi target (acceptance #10 first part): deviations should shrink
print("--- 0.9*phi stages ---")
rng2 = rng_from_seed(7)
zs_all = 0.8 * np.sqrt(rng2.uniform(size=(8, 2))) * np.exp(2j * np.pi * rng2.uniform(size=(8, 2)))
nodes_all = [(z[0] + z[1], z[0] * z[1]) for z in zs_all]
for stage in (2, 4, 6, 8):
    nodes = nodes_all[:stage]
    targets = [np.array([[0.9 * phi_scalar(s, p)]]) for s, p in nodes]
    prob = PickProblem(nodes, targets)
    t0 = time.time()
    V = solve_pick(prob, tol=1e-9)
    dev = max(abs(eval_tfr(V, complex(s), complex(p))[0, 0] - 0.9 * phi_scalar(s, p)) for s, p in grid)
    print(f"stage nodes={stage}: h={V.h} grid-dev={dev:.3e} ({time.time()-t0:.2f}s)")
