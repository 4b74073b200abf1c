"""JSON state files, reports and decomposition payloads.

State file::

    {"shape": [2, 2], "matrix": [[[re, im], ...], ...]}
    {"shape": [2, 2], "bloch": {"convention": "TILDE", "components": {"1,1": 0.5, ...}}}

Multi-index keys are comma-joined decimal integers.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .bloch import BlochVector, Convention, from_bloch
from .certificates import SeparableDecomposition, Term
from .errors import UsageError
from .linalg import DEFAULT_TOL, DensityMatrix, validate_density

REPORT_FORMAT = "blochsep-report/1"


def index_key(idx) -> str:
    return ",".join(str(int(i)) for i in idx)


def parse_index_key(key: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in key.split(","))
    except ValueError as exc:
        raise UsageError(f"bad multi-index key {key!r}") from exc


def matrix_to_json(mat) -> list:
    mat = np.asarray(mat, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in mat]


def matrix_from_json(rows) -> np.ndarray:
    arr = np.asarray(rows, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise UsageError("matrix entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def state_to_json(rho: DensityMatrix) -> dict:
    return {"shape": list(rho.shape), "matrix": matrix_to_json(rho.mat)}


def bloch_to_json(b: BlochVector) -> dict:
    return {
        "shape": list(b.shape),
        "bloch": {
            "convention": b.convention.value,
            "components": {index_key(k): v for k, v in b.nonzero().items()},
        },
    }


def state_from_json(doc: dict, tol: float = DEFAULT_TOL, shape_override=None) -> DensityMatrix:
    if not isinstance(doc, dict) or "shape" not in doc:
        raise UsageError("state file needs a 'shape' field")
    has_m, has_b = "matrix" in doc, "bloch" in doc
    if has_m == has_b:
        raise UsageError("state file needs exactly one of 'matrix' or 'bloch'")
    shape = [int(n) for n in doc["shape"]]
    if has_m:
        mat = matrix_from_json(doc["matrix"])
    else:
        bl = doc["bloch"]
        comps = {parse_index_key(k): float(v) for k, v in bl.get("components", {}).items()}
        b = BlochVector.from_components(shape, Convention.parse(bl.get("convention", "TILDE")), comps)
        mat = from_bloch(b)
    if shape_override is not None:
        shape = [int(n) for n in shape_override]
    return validate_density(mat, shape, tol)


def read_state(path, tol: float = DEFAULT_TOL, shape_override=None) -> DensityMatrix:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read state file {path}: {exc}") from exc
    return state_from_json(doc, tol, shape_override)


def write_json(doc, path=None) -> str:
    text = json.dumps(doc, indent=1, default=_json_default)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (set, frozenset, tuple)):
        return list(o)
    if hasattr(o, "value"):
        return o.value
    raise TypeError(f"cannot serialise {type(o).__name__}")


def decomposition_to_json(d: SeparableDecomposition) -> dict:
    """Local factors are stored once in a table and referenced by position."""
    table, keys, terms = [], {}, []
    for w, locs in d.terms:
        refs = []
        for m in locs:
            key = id(m)
            if key not in keys:
                keys[key] = len(table)
                table.append(matrix_to_json(m))
            refs.append(keys[key])
        terms.append({"weight": float(w), "factors": refs})
    return {"target_shape": list(d.target_shape), "factors": table, "terms": terms}


def decomposition_from_json(doc: dict) -> SeparableDecomposition:
    table = [matrix_from_json(m) for m in doc["factors"]]
    terms = [Term(float(t["weight"]), tuple(table[i] for i in t["factors"])) for t in doc["terms"]]
    return SeparableDecomposition(terms, tuple(doc["target_shape"]))
