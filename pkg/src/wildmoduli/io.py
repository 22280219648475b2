"""JSON encoding of the library's value types.

Complex numbers are ``[re, im]`` pairs and matrices are nested lists of
them.  Decoders validate against a JSON schema first, so malformed input is
reported with a JSON pointer to the offending value.
"""

from __future__ import annotations

import json

import jsonschema
import numpy as np

from .graphs import Graph
from .irregular import CurveSpec, GroupSpec, IrregularType, MarkedPoint, ResidueData
from .jetcore import Jet, PrincipalPart
from .quiver import GraphRep
from .rational import RationalMatrix


class InputError(ValueError):
    """Input does not match its schema."""

    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer


COMPLEX = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
MATRIX = {"type": "array", "items": {"type": "array", "items": COMPLEX}}
JET = {
    "type": "object",
    "required": ["n", "k", "coeffs"],
    "properties": {"n": {"type": "integer", "minimum": 1},
                   "k": {"type": "integer", "minimum": 1},
                   "coeffs": {"type": "array", "items": MATRIX, "minItems": 1}},
}
GRAPH = {
    "type": "object",
    "required": ["nodes", "adj"],
    "properties": {"nodes": {"type": "array"},
                   "adj": {"type": "array",
                           "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}}},
}
IRREGULAR_TYPE = {
    "type": "object",
    "required": ["blocks"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "blocks": {"type": "array", "minItems": 1, "items": {
            "type": "object", "required": ["coeffs", "mult"],
            "properties": {"coeffs": {"type": "array", "items": COMPLEX},
                           "mult": {"type": "integer", "minimum": 1}}}},
    },
}
RESIDUE_DATA = {
    "type": "object",
    "required": ["blocks"],
    "properties": {"blocks": {"type": "array", "items": {"type": "array", "items": {
        "type": "array", "prefixItems": [COMPLEX, {"type": "integer", "minimum": 1}],
        "minItems": 2, "maxItems": 2}}}},
}
GROUP = {
    "type": "object",
    "required": ["family"],
    "properties": {"family": {"type": "string"},
                   "n": {"type": "integer", "minimum": 0},
                   "dim": {"type": "integer", "minimum": 0},
                   "center_dim": {"type": "integer", "minimum": 0},
                   "torus_dim": {"type": "integer", "minimum": 0}},
}
CURVE = {
    "type": "object",
    "required": ["points"],
    "properties": {
        "genus": {"const": 0},
        "group": GROUP,
        "points": {"type": "array", "items": {
            "type": "object", "required": ["order"],
            "properties": {
                "position": {"anyOf": [COMPLEX, {"const": "inf"}]},
                "order": {"type": "integer", "minimum": 1},
                "irregular_type": IRREGULAR_TYPE,
                "residue": RESIDUE_DATA,
                "principal_part": JET}}},
    },
}
RATIONAL = {
    "type": "object",
    "required": ["n", "poles"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "poles": {"type": "array", "items": {
            "type": "object", "required": ["a", "parts"],
            "properties": {"a": COMPLEX, "parts": {"type": "array", "items": MATRIX, "minItems": 1}}}},
        "poly": {"type": "array", "items": MATRIX},
    },
}
GRAPH_REP = {
    "type": "object",
    "required": ["graph", "dims", "maps"],
    "properties": {"graph": GRAPH,
                   "dims": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                   "maps": {"type": "array", "items": MATRIX}},
}


def validate(obj, schema):
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(obj), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        pointer = "".join(f"/{p}" for p in err.absolute_path)
        raise InputError(err.message, pointer)


def _c(z):
    return [float(np.real(z)), float(np.imag(z))]


def encode_complex(z):
    return _c(z)


def decode_complex(v):
    return complex(v[0], v[1])


def encode_matrix(M):
    M = np.asarray(M)
    return [[_c(v) for v in row] for row in M]


def decode_matrix(rows, shape=None):
    arr = np.array([[decode_complex(v) for v in row] for row in rows], dtype=complex)
    if shape is not None:
        arr = arr.reshape(shape)
    return arr


def encode_jet(X):
    return {"n": X.n, "k": X.k, "coeffs": [encode_matrix(c) for c in X.coeffs]}


def _decode_stack(obj):
    validate(obj, JET)
    coeffs = np.array([decode_matrix(c) for c in obj["coeffs"]])
    if coeffs.shape != (obj["k"], obj["n"], obj["n"]):
        raise InputError(f"coefficients have shape {coeffs.shape}, expected "
                         f"({obj['k']}, {obj['n']}, {obj['n']})", "/coeffs")
    return coeffs


def decode_jet(obj):
    return Jet(_decode_stack(obj))


encode_principal_part = encode_jet


def decode_principal_part(obj):
    return PrincipalPart(_decode_stack(obj))


def encode_graph(g: Graph):
    return {"nodes": list(g.nodes), "adj": g.adj.tolist()}


def decode_graph(obj):
    validate(obj, GRAPH)
    try:
        return Graph(tuple(obj["nodes"]), np.array(obj["adj"], dtype=np.int64))
    except ValueError as exc:
        raise InputError(str(exc), "/adj") from exc


def encode_irregular_type(Q: IrregularType):
    return {"n": Q.n, "blocks": [{"coeffs": [_c(c) for c in q], "mult": m} for q, m in Q.blocks]}


def decode_irregular_type(obj):
    validate(obj, IRREGULAR_TYPE)
    Q = IrregularType(tuple(([decode_complex(c) for c in b["coeffs"]], b["mult"])
                            for b in obj["blocks"]))
    if "n" in obj and obj["n"] != Q.n:
        raise InputError(f"block multiplicities sum to {Q.n}, not {obj['n']}", "/n")
    return Q


def encode_residue_data(L: ResidueData):
    return {"blocks": [[[_c(lam), m] for lam, m in blk] for blk in L.blocks]}


def decode_residue_data(obj):
    validate(obj, RESIDUE_DATA)
    return ResidueData(tuple(tuple((decode_complex(lam), m) for lam, m in blk)
                             for blk in obj["blocks"]))


def encode_group(G: GroupSpec):
    return {"family": G.family, "n": G.n, "dim": G.dim, "center_dim": G.center_dim,
            "torus_dim": G.torus_dim}


def decode_group(obj):
    validate(obj, GROUP)
    fam = obj["family"]
    if fam in ("GL", "SL"):
        if "n" not in obj:
            raise InputError("GL/SL groups need n", "/n")
        return getattr(GroupSpec, fam)(obj["n"])
    missing = [k for k in ("dim",) if k not in obj]
    if missing:
        raise InputError(f"raw group {fam} needs {missing}", "")
    return GroupSpec.raw(fam, obj["dim"], obj.get("center_dim", 0), obj.get("torus_dim", 0),
                         obj.get("n", 0))


def parse_group(text) -> GroupSpec:
    """``"SL2"``, ``"GL3"`` and the like."""
    text = text.strip().upper()
    for fam in ("GL", "SL"):
        if text.startswith(fam) and text[len(fam):].isdigit():
            return getattr(GroupSpec, fam)(int(text[len(fam):]))
    raise InputError(f"unknown group {text!r}; expected GLn or SLn")


def encode_curve(curve: CurveSpec, G: GroupSpec | None = None):
    pts = []
    for p in curve.points:
        d = {"position": "inf" if p.position is None else _c(p.position), "order": p.order}
        if p.irregular_type is not None:
            d["irregular_type"] = encode_irregular_type(p.irregular_type)
        if p.residue is not None:
            d["residue"] = encode_residue_data(p.residue)
        if p.principal_part is not None:
            d["principal_part"] = encode_principal_part(p.principal_part)
        pts.append(d)
    out = {"genus": curve.genus, "points": pts}
    if G is not None:
        out["group"] = encode_group(G)
    return out


def decode_curve(obj):
    """Returns ``(CurveSpec, GroupSpec or None)``."""
    validate(obj, CURVE)
    pts = []
    for idx, p in enumerate(obj["points"]):
        pos = p.get("position", "inf")
        try:
            pts.append(MarkedPoint(
                None if pos == "inf" else decode_complex(pos), p["order"],
                decode_irregular_type(p["irregular_type"]) if "irregular_type" in p else None,
                decode_residue_data(p["residue"]) if "residue" in p else None,
                decode_principal_part(p["principal_part"]) if "principal_part" in p else None))
        except InputError as exc:
            raise InputError(str(exc).split(": ", 1)[-1], f"/points/{idx}{exc.pointer}") from exc
        except ValueError as exc:
            raise InputError(str(exc), f"/points/{idx}") from exc
    G = decode_group(obj["group"]) if "group" in obj else None
    return CurveSpec(tuple(pts), obj.get("genus", 0)), G


def encode_rational(A: RationalMatrix):
    return {"n": A.n,
            "poles": [{"a": _c(a), "parts": [encode_matrix(c) for c in p]}
                      for a, p in zip(A.positions, A.parts)],
            "poly": [encode_matrix(c) for c in A.poly]}


def decode_rational(obj):
    validate(obj, RATIONAL)
    n = obj["n"]
    try:
        parts = [np.array([decode_matrix(c, (n, n)) for c in p["parts"]]) for p in obj["poles"]]
        poly = np.array([decode_matrix(c, (n, n)) for c in obj.get("poly", [])]).reshape(-1, n, n)
        return RationalMatrix(tuple(decode_complex(p["a"]) for p in obj["poles"]),
                              tuple(parts), poly)
    except ValueError as exc:
        raise InputError(str(exc), "/poles") from exc


def encode_graph_rep(r: GraphRep):
    maps = []
    for x, y in zip(r.xs, r.ys):
        maps.extend([encode_matrix(x), encode_matrix(y)])
    return {"graph": encode_graph(r.graph), "dims": list(r.dims), "maps": maps}


def decode_graph_rep(obj):
    validate(obj, GRAPH_REP)
    g = decode_graph(obj["graph"])
    d = obj["dims"]
    edges = g.edges()
    if len(obj["maps"]) != 2 * len(edges):
        raise InputError(f"expected {2 * len(edges)} matrices, got {len(obj['maps'])}", "/maps")
    xs, ys = [], []
    for e, (i, j, _) in enumerate(edges):
        xs.append(decode_matrix(obj["maps"][2 * e], (d[j], d[i])) if d[i] * d[j] else
                  np.zeros((d[j], d[i])))
        ys.append(decode_matrix(obj["maps"][2 * e + 1], (d[i], d[j])) if d[i] * d[j] else
                  np.zeros((d[i], d[j])))
    return GraphRep(g, d, tuple(xs), tuple(ys))


def _default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return _c(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_default)


def load_json(path):
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from exc
