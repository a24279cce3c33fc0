"""JSON forms for every artifact the CLI reads or writes.

All payloads are plain dicts of floats/ints so ``json.dumps`` with sorted
keys is byte-stable; complex numbers are [re, im] pairs and matrices are
row-major lists of such pairs.
"""

from __future__ import annotations

import numpy as np

from .errors import SchemaError
from .factor import StructuredColligation
from .pick import PickProblem
from .realization import Colligation
from .rif import RationalInnerFn
from .sympoly import MultiPoly


def _c(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise SchemaError(f"matrix must be 2-D, got ndim={m.ndim}")
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [_c(v) for v in m.ravel()],
    }


def matrix_from_json(obj) -> np.ndarray:
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        data = obj["data"]
        if len(data) != rows * cols:
            raise SchemaError(f"matrix data length {len(data)} != {rows}*{cols}")
        flat = np.array([complex(re, im) for re, im in data], dtype=complex)
    except SchemaError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed matrix JSON: {exc}") from exc
    return flat.reshape(rows, cols)


def poly_to_json(f: MultiPoly) -> dict:
    return {
        "dim": f.dim,
        "terms": [
            {"exp": list(e), "coef": _c(c)} for e, c in sorted(f.terms.items())
        ],
    }


def poly_from_json(obj) -> MultiPoly:
    try:
        dim = int(obj["dim"])
        terms = {
            tuple(int(k) for k in t["exp"]): complex(t["coef"][0], t["coef"][1])
            for t in obj["terms"]
        }
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise SchemaError(f"malformed polynomial JSON: {exc}") from exc
    return MultiPoly(dim, terms)


def rif_to_json(f: RationalInnerFn) -> dict:
    return {"d": f.d, "k": f.k, "tau": _c(f.tau), "xi": poly_to_json(f.xi)}


def rif_from_json(obj) -> RationalInnerFn:
    try:
        d = int(obj["d"])
        k = int(obj["k"])
        tau = complex(obj["tau"][0], obj["tau"][1])
        xi = poly_from_json(obj["xi"])
    except SchemaError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise SchemaError(f"malformed inner-function JSON: {exc}") from exc
    if xi.dim != d:
        raise SchemaError(f"xi has {xi.dim} variables but d={d}")
    return RationalInnerFn(d=d, k=k, tau=tau, xi=xi)


def colligation_to_json(V: Colligation) -> dict:
    out = {
        "tau": matrix_to_json(V.tau),
        "A": matrix_to_json(V.A),
        "B": matrix_to_json(V.B),
        "C": matrix_to_json(V.C),
        "D": matrix_to_json(V.D),
    }
    if isinstance(V, StructuredColligation):
        out["h1"] = V.h1
        out["h2"] = V.h2
    return out


def colligation_from_json(obj) -> Colligation:
    try:
        blocks = {k: matrix_from_json(obj[k]) for k in ("tau", "A", "B", "C", "D")}
    except SchemaError:
        raise
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed colligation JSON: {exc}") from exc
    try:
        if "h1" in obj or "h2" in obj:
            return StructuredColligation(h1=int(obj["h1"]), h2=int(obj["h2"]), **blocks)
        return Colligation(**blocks)
    except SchemaError:
        raise
    except Exception as exc:
        raise SchemaError(f"invalid colligation data: {exc}") from exc


def pick_problem_to_json(p: PickProblem) -> dict:
    return {
        "nodes": [
            [s.real, s.imag, q.real, q.imag] for s, q in p.nodes
        ],
        "targets": [matrix_to_json(t) for t in p.targets],
    }


def pick_problem_from_json(obj) -> PickProblem:
    try:
        nodes = [
            (complex(n[0], n[1]), complex(n[2], n[3])) for n in obj["nodes"]
        ]
        targets = [matrix_from_json(t) for t in obj["targets"]]
    except SchemaError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise SchemaError(f"malformed Pick problem JSON: {exc}") from exc
    return PickProblem(nodes, targets)
