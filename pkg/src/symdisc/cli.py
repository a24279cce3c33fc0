"""Command-line front-end: JSON in, JSON out, seeded determinism.

Exit codes: 0 success, 1 I/O or schema problems, 2 domain errors (the
error JSON carries the stable error code and, when available, a residual).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import approx, factor, pick, realization, rif, serialize, sympoly
from .errors import SchemaError, SymdiscError
from .linalg import herm, max_abs


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise SchemaError(f"expected 're,im', got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise SchemaError(f"bad complex literal {text!r}") from exc


def _parse_point(text: str) -> tuple[complex, complex]:
    parts = text.split(",")
    if len(parts) != 4:
        raise SchemaError(f"expected 's_re,s_im,p_re,p_im', got {text!r}")
    try:
        vals = [float(v) for v in parts]
    except ValueError as exc:
        raise SchemaError(f"bad point literal {text!r}") from exc
    return complex(vals[0], vals[1]), complex(vals[2], vals[3])


def _parse_exponents(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError as exc:
        raise SchemaError(f"bad exponent vector {text!r}") from exc


def _load(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc


def _emit(payload: dict, out_path: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_poly_reflect(args) -> dict:
    f = serialize.poly_from_json(_load(args.f))
    n = _parse_exponents(args.n)
    return serialize.poly_to_json(sympoly.reflect_polydisc(f, n))


def _cmd_poly_reflect_g(args) -> dict:
    xi = serialize.poly_from_json(_load(args.xi))
    return serialize.poly_to_json(sympoly.reflect_G(xi, args.k))


def _cmd_poly_sym2elem(args) -> dict:
    f = serialize.poly_from_json(_load(args.f))
    return serialize.poly_to_json(sympoly.symmetric_to_elementary(f))


def _cmd_rif_build(args) -> dict:
    xi = serialize.poly_from_json(_load(args.xi))
    tau = _parse_complex(args.tau)
    f = rif.build_rif(xi, args.k, tau, samples=args.samples, seed=args.seed)
    return serialize.rif_to_json(f)


def _cmd_rif_check(args) -> dict:
    f = serialize.rif_from_json(_load(args.f))
    if args.threads > 1:
        # Chunked evaluation with an order-preserving reduce keeps the result
        # independent of the thread count.
        chunk = max(1, args.samples // args.threads)
        counts = [chunk] * (args.samples // chunk)
        rest = args.samples - sum(counts)
        if rest:
            counts.append(rest)
        offsets = np.cumsum([0] + counts[:-1])
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            devs = list(
                pool.map(
                    lambda co: rif.check_inner(f, count=co[0], seed=args.seed + co[1]),
                    zip(counts, range(len(counts))),
                )
            )
        dev = max(devs)
    else:
        dev = rif.check_inner(f, count=args.samples, seed=args.seed)
    return {"max_deviation": dev}


def _cmd_rif_eval(args) -> dict:
    f = serialize.rif_from_json(_load(args.f))
    w = _parse_point(args.at) if f.d == 2 else None
    if w is None:
        coords = [float(v) for v in args.at.split(",")]
        if len(coords) != 2 * f.d:
            raise SchemaError(f"--at needs {2 * f.d} floats for d={f.d}")
        w = tuple(complex(coords[2 * j], coords[2 * j + 1]) for j in range(f.d))
    val = rif.eval_rif(f, np.array(w, dtype=complex))
    return {"value": [val.real, val.imag]}


def _cmd_tfr_eval(args) -> dict:
    V = serialize.colligation_from_json(_load(args.colligation))
    s, p = _parse_point(args.at)
    return serialize.matrix_to_json(realization.eval_tfr(V, s, p))


def _cmd_tfr_check(args) -> dict:
    V = serialize.colligation_from_json(_load(args.colligation))
    rep = realization.check_colligation(V)
    return {
        "isometry_residual": rep["isometry"],
        "unitarity_residual": rep["unitarity"],
        "tau_residual": rep["tau"],
    }


def _cmd_tfr_adjoint(args) -> dict:
    V = serialize.colligation_from_json(_load(args.colligation))
    return serialize.colligation_to_json(realization.adjoint_tfr(V))


def _cmd_tfr_embed(args) -> dict:
    V = serialize.colligation_from_json(_load(args.colligation))
    W, row, col = realization.embed_in_inner(V)
    return {"W": serialize.colligation_to_json(W), "row_index": row, "col_index": col}


def _cmd_pick_solve(args) -> dict:
    problem = serialize.pick_problem_from_json(_load(args.problem))
    V = pick.solve_pick(problem, max_iters=args.max_iters, tol=args.tol)
    return serialize.colligation_to_json(V)


def _cmd_pick_verify(args) -> dict:
    problem = serialize.pick_problem_from_json(_load(args.problem))
    V = serialize.colligation_from_json(_load(args.colligation))
    rep = realization.check_colligation(V)
    return {
        "interpolation_residual": pick.interpolation_residual(problem, V),
        "isometry_residual": rep["isometry"],
        "unitarity_residual": rep["unitarity"],
    }


def _cmd_approx_run(args) -> dict:
    target = serialize.colligation_from_json(_load(args.target))
    run = approx.caratheodory_sequence(
        target,
        stages=args.stages,
        nodes_per_stage=args.nodes_per_stage,
        grid_size=args.grid,
        seed=args.seed,
        radius=args.radius,
        tol=args.tol,
        max_iters=args.max_iters,
    )
    return run.report()


def _cmd_factor_compose(args) -> dict:
    V1 = serialize.colligation_from_json(_load(args.v1))
    V2 = serialize.colligation_from_json(_load(args.v2))
    return serialize.colligation_to_json(factor.compose_colligations(V1, V2))


def _structured(obj) -> factor.StructuredColligation:
    V = serialize.colligation_from_json(obj)
    if not isinstance(V, factor.StructuredColligation):
        raise SchemaError("expected a structured colligation (h1/h2 fields)")
    return V


def _factor_aux(args, V) -> dict:
    aux = {}
    if getattr(args, "x", None):
        aux["X"] = serialize.matrix_from_json(_load(args.x))
    if getattr(args, "y", None):
        aux["Y"] = serialize.matrix_from_json(_load(args.y))
    if getattr(args, "a1", None):
        aux["A1"] = serialize.matrix_from_json(_load(args.a1))
    if getattr(args, "a2", None):
        aux["A2"] = serialize.matrix_from_json(_load(args.a2))
    if getattr(args, "a", None):
        aux["A"] = serialize.matrix_from_json(_load(args.a))
    if args.variant == "invertible" and ("A1" not in aux or "A2" not in aux):
        # Default to the canonical pair used by the splitter.
        from .linalg import psd_sqrt

        A2 = psd_sqrt(herm(V.A) @ V.A + herm(V.C1) @ V.C1)
        aux.setdefault("A2", A2)
        if max_abs(A2) > 0 and np.linalg.cond(A2) < 1e12:
            aux.setdefault("A1", V.A @ np.linalg.inv(A2))
    return aux


def _cmd_factor_check(args) -> dict:
    V = _structured(_load(args.v))
    aux = _factor_aux(args, V)
    return {k: float(v) for k, v in factor.check_factor_conditions(V, args.variant, aux).items()}


def _cmd_factor_split(args) -> dict:
    V = _structured(_load(args.v))
    if args.variant == "invertible":
        V1, V2 = factor.split_invertible(V)
    elif args.variant == "zero-selfadjoint":
        V1, V2 = factor.split_zero_selfadjoint(V)
    elif args.variant == "zero-zero":
        if not args.x or not args.y:
            raise SchemaError("variant zero-zero needs --x and --y")
        X = serialize.matrix_from_json(_load(args.x))
        Y = serialize.matrix_from_json(_load(args.y))
        V1, V2 = factor.split_zero_zero(V, X, Y)
    else:
        raise SchemaError(f"unknown variant {args.variant!r}")
    return {
        "v1": serialize.colligation_to_json(V1),
        "v2": serialize.colligation_to_json(V2),
    }


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="symdisc", description=__doc__)
    sub = p.add_subparsers(dest="group", required=True)

    def add(group_sub, name, fn, **flags):
        sp = group_sub.add_parser(name)
        for flag, spec in flags.items():
            sp.add_argument(flag, **spec)
        sp.set_defaults(handler=fn)
        return sp

    poly = p_sub = sub.add_parser("poly").add_subparsers(dest="cmd", required=True)
    add(poly, "reflect", _cmd_poly_reflect,
        **{"--f": dict(required=True), "--n": dict(required=True), "-o": dict(dest="out", default=None)})
    add(poly, "reflect-g", _cmd_poly_reflect_g,
        **{"--xi": dict(required=True), "--k": dict(type=int, required=True), "-o": dict(dest="out", default=None)})
    add(poly, "sym2elem", _cmd_poly_sym2elem,
        **{"--f": dict(required=True), "-o": dict(dest="out", default=None)})

    rif_sub = sub.add_parser("rif").add_subparsers(dest="cmd", required=True)
    add(rif_sub, "build", _cmd_rif_build,
        **{"--xi": dict(required=True), "--k": dict(type=int, required=True),
           "--tau": dict(default="1,0"), "--samples": dict(type=int, default=10_000),
           "--seed": dict(type=int, default=0), "-o": dict(dest="out", default=None)})
    add(rif_sub, "check", _cmd_rif_check,
        **{"--f": dict(required=True), "--samples": dict(type=int, default=1000),
           "--seed": dict(type=int, default=0), "--threads": dict(type=int, default=1),
           "-o": dict(dest="out", default=None)})
    add(rif_sub, "eval", _cmd_rif_eval,
        **{"--f": dict(required=True), "--at": dict(required=True), "-o": dict(dest="out", default=None)})

    tfr = sub.add_parser("tfr").add_subparsers(dest="cmd", required=True)
    add(tfr, "eval", _cmd_tfr_eval,
        **{"--colligation": dict(required=True), "--at": dict(required=True), "-o": dict(dest="out", default=None)})
    add(tfr, "check", _cmd_tfr_check,
        **{"--colligation": dict(required=True), "-o": dict(dest="out", default=None)})
    add(tfr, "adjoint", _cmd_tfr_adjoint,
        **{"--colligation": dict(required=True), "-o": dict(dest="out", default=None)})
    add(tfr, "embed", _cmd_tfr_embed,
        **{"--colligation": dict(required=True), "-o": dict(dest="out", default=None)})

    pk = sub.add_parser("pick").add_subparsers(dest="cmd", required=True)
    add(pk, "solve", _cmd_pick_solve,
        **{"--problem": dict(required=True), "--tol": dict(type=float, default=1e-8),
           "--max-iters": dict(dest="max_iters", type=int, default=50_000),
           "-o": dict(dest="out", default=None)})
    add(pk, "verify", _cmd_pick_verify,
        **{"--problem": dict(required=True), "--colligation": dict(required=True),
           "-o": dict(dest="out", default=None)})

    ap = sub.add_parser("approx").add_subparsers(dest="cmd", required=True)
    add(ap, "run", _cmd_approx_run,
        **{"--target": dict(required=True), "--stages": dict(type=int, default=4),
           "--nodes-per-stage": dict(dest="nodes_per_stage", type=int, default=2),
           "--grid": dict(type=int, default=50), "--radius": dict(type=float, default=0.7),
           "--seed": dict(type=int, default=7), "--tol": dict(type=float, default=1e-9),
           "--max-iters": dict(dest="max_iters", type=int, default=50_000),
           "-o": dict(dest="out", default=None)})

    fa = sub.add_parser("factor").add_subparsers(dest="cmd", required=True)
    add(fa, "compose", _cmd_factor_compose,
        **{"--v1": dict(required=True), "--v2": dict(required=True), "-o": dict(dest="out", default=None)})
    add(fa, "split", _cmd_factor_split,
        **{"--v": dict(required=True),
           "--variant": dict(required=True, choices=["invertible", "zero-selfadjoint", "zero-zero"]),
           "--x": dict(default=None), "--y": dict(default=None),
           "-o": dict(dest="out", default=None)})
    add(fa, "check", _cmd_factor_check,
        **{"--v": dict(required=True),
           "--variant": dict(required=True, choices=["invertible", "zero-selfadjoint", "zero-zero"]),
           "--x": dict(default=None), "--y": dict(default=None),
           "--a1": dict(default=None), "--a2": dict(default=None), "--a": dict(default=None),
           "-o": dict(dest="out", default=None)})
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload = args.handler(args)
    except SchemaError as exc:
        _emit({"error": exc.code, "detail": exc.detail, "residual": exc.residual}, None)
        return 1
    except SymdiscError as exc:
        _emit({"error": exc.code, "detail": exc.detail, "residual": exc.residual}, None)
        return 2
    _emit(payload, getattr(args, "out", None))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
