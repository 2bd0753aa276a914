"""JSON encodings for matrices, vectors, fiducials and the other file types.

Complex numbers are stored as ``[re, im]`` pairs, matrices row-major::

    {"rows": 2, "cols": 2, "data": [[1, 0], [0, 0], [0, 0], [1, 0]]}
"""

import json
import math
import os
import tempfile

import numpy as np

from .definetti import Mixture
from .exceptions import QbsicError, SchemaError
from .scenarios import IncidenceTable
from .sic import Fiducial

PROB_SUM_TOL = 1e-10

SCHEMAS = ("matrix", "vector", "fiducial", "probvector", "conditional", "table", "mixture")


def encode_complex(z):
    return [[float(c.real), float(c.imag)] for c in np.asarray(z, dtype=complex).ravel()]


def encode_matrix(m):
    m = np.asarray(m, dtype=complex)
    return {"rows": m.shape[0], "cols": m.shape[1], "data": encode_complex(m)}


def encode_vector(v):
    v = np.asarray(v, dtype=complex)
    return {"dim": v.shape[0], "data": encode_complex(v)}


def encode_fiducial(f):
    return {"d": f.d, "vector": encode_complex(f.vector), "provenance": f.provenance}


def encode_probvector(p, d):
    return {"d": int(d), "p": [float(x) for x in p]}


def encode_conditional(r, d):
    r = np.asarray(r, dtype=float)
    return {"d": int(d), "rows": r.shape[0], "r": r.tolist()}


def encode_mixture(m):
    return {
        "d": m.d,
        "components": [{"w": float(w), "rho": encode_matrix(rho)}
                       for w, rho in zip(m.weights, m.states)],
    }


def dumps(obj):
    """Canonical single-line JSON; identical inputs give identical bytes."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def write_json(path, obj):
    """Write ``obj`` to ``path`` atomically (temp file in the same directory + rename)."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(dumps(obj))
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _require(doc, key, where):
    if not isinstance(doc, dict):
        raise SchemaError(f"{where or '<root>'}: expected an object")
    if key not in doc:
        raise SchemaError(f"{where}{'.' if where else ''}{key}: missing")
    return doc[key]


def _int(value, where, minimum=1):
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise SchemaError(f"{where}: expected an integer >= {minimum}, got {value!r}")
    return value


def _real(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{where}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise SchemaError(f"{where}: non-finite number {value!r}")
    return float(value)


def _complex_list(data, n, where):
    if not isinstance(data, list):
        raise SchemaError(f"{where}: expected a list")
    if len(data) != n:
        raise SchemaError(f"{where}: expected {n} entries, got {len(data)}")
    out = np.empty(n, dtype=complex)
    for k, pair in enumerate(data):
        if not isinstance(pair, list) or len(pair) != 2:
            raise SchemaError(f"{where}[{k}]: expected [re, im]")
        out[k] = complex(_real(pair[0], f"{where}[{k}][0]"), _real(pair[1], f"{where}[{k}][1]"))
    return out


def parse_matrix(doc, where=""):
    pre = f"{where}." if where else ""
    rows = _int(_require(doc, "rows", where), pre + "rows")
    cols = _int(_require(doc, "cols", where), pre + "cols")
    data = _complex_list(_require(doc, "data", where), rows * cols, pre + "data")
    return data.reshape(rows, cols)


def parse_vector(doc, where=""):
    pre = f"{where}." if where else ""
    dim = _int(_require(doc, "dim", where), pre + "dim")
    return _complex_list(_require(doc, "data", where), dim, pre + "data")


def parse_fiducial(doc):
    d = _int(_require(doc, "d", ""), "d", 2)
    vec = _complex_list(_require(doc, "vector", ""), d, "vector")
    prov = doc.get("provenance", {})
    if not isinstance(prov, dict):
        raise SchemaError("provenance: expected an object")
    try:
        return Fiducial(vec, prov)
    except QbsicError as exc:
        raise SchemaError(f"vector: {exc}") from exc


def _real_list(data, where):
    if not isinstance(data, list):
        raise SchemaError(f"{where}: expected a list")
    return np.array([_real(x, f"{where}[{k}]") for k, x in enumerate(data)], dtype=float)


def parse_probvector(doc):
    d = _int(_require(doc, "d", ""), "d")
    p = _real_list(_require(doc, "p", ""), "p")
    if p.size != d * d:
        raise SchemaError(f"p: expected {d * d} entries for d={d}, got {p.size}")
    neg = np.flatnonzero(p < -1e-12)
    if neg.size:
        raise SchemaError(f"p[{neg[0]}]: negative probability {p[neg[0]]}")
    if abs(p.sum() - 1.0) > PROB_SUM_TOL:
        raise SchemaError(f"p: sum deviates from 1 (sum = {p.sum():.15g})")
    return d, p


def parse_conditional(doc):
    d = _int(_require(doc, "d", ""), "d")
    rows = _int(_require(doc, "rows", ""), "rows")
    r = _require(doc, "r", "")
    if not isinstance(r, list) or len(r) != rows:
        raise SchemaError(f"r: expected {rows} rows")
    mat = [_real_list(row, f"r[{j}]") for j, row in enumerate(r)]
    if len({row.size for row in mat}) != 1:
        raise SchemaError("r: rows have different lengths")
    return d, np.array(mat)


def parse_table(doc):
    cols = _require(doc, "columns", "")
    if not isinstance(cols, list) or not cols:
        raise SchemaError("columns: expected a nonempty list")
    for k, col in enumerate(cols):
        if not isinstance(col, list) or not all(isinstance(x, str) for x in col):
            raise SchemaError(f"columns[{k}]: expected a list of strings")
    try:
        return IncidenceTable(tuple(tuple(c) for c in cols))
    except QbsicError as exc:
        raise SchemaError(f"columns: {exc}") from exc


def parse_mixture(doc):
    d = _int(_require(doc, "d", ""), "d")
    comps = _require(doc, "components", "")
    if not isinstance(comps, list) or not comps:
        raise SchemaError("components: expected a nonempty list")
    weights, states = [], []
    for k, comp in enumerate(comps):
        where = f"components[{k}]"
        weights.append(_real(_require(comp, "w", where), where + ".w"))
        rho = parse_matrix(_require(comp, "rho", where), where + ".rho")
        if rho.shape != (d, d):
            raise SchemaError(f"{where}.rho: expected {d}x{d}, got {rho.shape}")
        states.append(rho)
    try:
        return Mixture(np.array(weights), np.array(states))
    except QbsicError as exc:
        raise SchemaError(f"components: {exc}") from exc


_PARSERS = {
    "matrix": parse_matrix,
    "vector": parse_vector,
    "fiducial": parse_fiducial,
    "probvector": parse_probvector,
    "conditional": parse_conditional,
    "table": parse_table,
    "mixture": parse_mixture,
}


def validate_schema(path, kind):
    """Read ``path`` and parse it as ``kind``; raise :class:`SchemaError` on failure.

    The error message starts with the path of the first offending field.
    """
    if kind not in _PARSERS:
        raise SchemaError(f"unknown schema {kind!r}; choose from {SCHEMAS}")
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"<root>: malformed JSON ({exc})") from exc
    except OSError as exc:
        raise SchemaError(f"<root>: cannot read {path} ({exc})") from exc
    return _PARSERS[kind](doc)


__all__ = [
    "SCHEMAS", "encode_complex", "encode_matrix", "encode_vector", "encode_fiducial",
    "encode_probvector", "encode_conditional", "encode_mixture", "dumps", "write_json",
    "parse_matrix", "parse_vector", "parse_fiducial", "parse_probvector",
    "parse_conditional", "parse_table", "parse_mixture", "validate_schema",
]
