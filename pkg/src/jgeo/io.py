"""JSON documents for algebras, elements, functionals, tangents and geodesics.

A document looks like::

    {"schema_version": "1",
     "algebra": {"blocks": [2]},
     "state": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]}

Exactly one payload key is allowed: ``element``, ``state``, ``positive``,
``tangent`` (``{"base": ..., "value": ...}``) or ``geodesic``
(``{"start": ..., "direction": ...}``).  A matrix payload is a list of blocks,
each a row-major list of rows of entries; an entry is ``[re, im]`` or a bare
real.  A single-block algebra may give its one matrix directly, and an
Abelian algebra may give the list of diagonal entries.  A top-level
``blocks`` key may stand in for ``algebra``.

Numbers are written with 17 significant digits so that emit followed by
parse reproduces every double exactly.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
from typing import Any

import numpy as np

from .algebra import AlgebraShape, Element
from .errors import InputError, SchemaError, ValidationError
from .geodesic import GeodesicPoint, GeodesicSpec
from .orbits import PositiveFunctional, StateFunctional, TangentVector

SCHEMA_VERSION = "1"
PAYLOAD_KEYS = ("element", "state", "positive", "tangent", "geodesic")
TOP_KEYS = {"schema_version", "algebra", "blocks", *PAYLOAD_KEYS}


# parsing


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _entry(x, path: str) -> complex:
    if _is_number(x):
        return complex(float(x), 0.0)
    if isinstance(x, list) and len(x) == 2 and all(_is_number(v) for v in x):
        return complex(float(x[0]), float(x[1]))
    raise SchemaError(f"{path}: expected a number or [re, im] pair")


def _depth(x) -> int:
    d = 0
    while isinstance(x, list) and x:
        if len(x) == 2 and all(_is_number(v) for v in x):
            return d + 1  # a [re, im] pair counts as one entry level
        x = x[0]
        d += 1
    return d


def _matrix(rows, n: int, path: str) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != n:
        raise SchemaError(f"{path}: expected {n} rows")
    out = np.zeros((n, n), complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise SchemaError(f"{path}[{i}]: expected {n} entries")
        for j, x in enumerate(row):
            out[i, j] = _entry(x, f"{path}[{i}][{j}]")
    return out


def _element(raw, shape: AlgebraShape, path: str) -> Element:
    if not isinstance(raw, list):
        raise SchemaError(f"{path}: expected a list")
    nb = len(shape.blocks)
    d = _depth(raw)
    if shape.is_abelian and len(raw) == nb and d <= 2:
        # diagonal shorthand
        return Element(shape, [[[_entry(x, f"{path}[{k}]")]] for k, x in enumerate(raw)])
    n0 = shape.blocks[0]
    if nb == 1 and len(raw) == n0 and (n0 > 1 or d == 3):
        return Element(shape, [_matrix(raw, shape.blocks[0], path)])
    if len(raw) != nb:
        raise SchemaError(f"{path}: expected {nb} blocks, got {len(raw)}")
    return Element(shape, [_matrix(b, n, f"{path}[{k}]") for k, (b, n) in enumerate(zip(raw, shape.blocks))])


def _self_adjoint(x: Element, path: str) -> Element:
    if not x.is_self_adjoint():
        for k, b in enumerate(x.blocks):
            bad = np.argwhere(np.abs(b - b.conj().T) > 1e-10 * (1 + x.max_abs()))
            if bad.size:
                i, j = bad[0]
                raise ValidationError("matrix is not self-adjoint", f"{path}[{k}][{i}][{j}]")
    return x


def _functional(raw, shape: AlgebraShape, path: str, state: bool) -> PositiveFunctional:
    x = _self_adjoint(_element(raw, shape, path), path)
    try:
        return StateFunctional(x) if state else PositiveFunctional(x)
    except InputError as exc:
        raise ValidationError(str(exc), path) from None


def _object(raw, keys: tuple[str, ...], path: str) -> dict:
    if not isinstance(raw, dict):
        raise SchemaError(f"{path}: expected an object")
    extra = set(raw) - set(keys)
    if extra:
        raise SchemaError(f"{path}: unknown field(s) {sorted(extra)}")
    missing = [k for k in keys if k not in raw]
    if missing:
        raise SchemaError(f"{path}: missing field(s) {missing}")
    return raw


def _shape(doc: dict) -> AlgebraShape:
    if "algebra" in doc and "blocks" in doc:
        raise SchemaError("give either 'algebra' or 'blocks', not both")
    if "algebra" in doc:
        blocks = _object(doc["algebra"], ("blocks",), "algebra")["blocks"]
        path = "algebra.blocks"
    elif "blocks" in doc:
        blocks, path = doc["blocks"], "blocks"
    else:
        raise SchemaError("missing 'algebra'")
    if not isinstance(blocks, list) or not blocks or not all(isinstance(n, int) and not isinstance(n, bool) for n in blocks):
        raise SchemaError(f"{path}: expected a non-empty list of integers")
    try:
        return AlgebraShape(tuple(blocks))
    except InputError as exc:
        raise ValidationError(str(exc), path) from None


def parse_value(doc: dict):
    """Typed value of an already-decoded document."""
    if not isinstance(doc, dict):
        raise SchemaError("document must be a JSON object")
    extra = set(doc) - TOP_KEYS
    if extra:
        raise SchemaError(f"unknown field(s) {sorted(extra)}")
    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {version!r}")
    payload = [k for k in PAYLOAD_KEYS if k in doc]
    if len(payload) != 1:
        raise SchemaError(f"expected exactly one of {list(PAYLOAD_KEYS)}")
    kind = payload[0]
    shape = _shape(doc)
    raw = doc[kind]
    if kind == "element":
        return _element(raw, shape, kind)
    if kind in ("state", "positive"):
        return _functional(raw, shape, kind, kind == "state")
    if kind == "tangent":
        obj = _object(raw, ("base", "value"), kind)
        base = _functional(obj["base"], shape, "tangent.base", state=False)
        if abs(base.density.trace() - 1.0) <= 1e-12:
            base = StateFunctional(base.density)
        value = _self_adjoint(_element(obj["value"], shape, "tangent.value"), "tangent.value")
        try:
            return TangentVector(base, value)
        except InputError as exc:
            raise ValidationError(str(exc), "tangent.value") from None
    obj = _object(raw, ("start", "direction"), kind)
    start = _functional(obj["start"], shape, "geodesic.start", state=True)
    direction = _self_adjoint(_element(obj["direction"], shape, "geodesic.direction"), "geodesic.direction")
    return GeodesicSpec(start, direction)


def parse(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc}") from None
    return parse_value(doc)


def load(path) -> Any:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# emitting


def _num(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise InputError(f"cannot serialize non-finite number {x}")
    s = format(x, ".17g")
    return "0" if s == "-0" else s


def dumps(obj) -> str:
    """Deterministic compact JSON with 17-significant-digit floats."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _blocks_raw(x: Element) -> list:
    return [[[[z.real, z.imag] for z in row] for row in b] for b in x.blocks]


def to_document(value) -> dict:
    if isinstance(value, GeodesicSpec):
        shape = value.start.shape
        payload = ("geodesic", {"start": _blocks_raw(value.start.density), "direction": _blocks_raw(value.direction)})
    elif isinstance(value, TangentVector):
        shape = value.base.shape
        payload = ("tangent", {"base": _blocks_raw(value.base.density), "value": _blocks_raw(value.value)})
    elif isinstance(value, StateFunctional):
        shape, payload = value.shape, ("state", _blocks_raw(value.density))
    elif isinstance(value, PositiveFunctional):
        shape, payload = value.shape, ("positive", _blocks_raw(value.density))
    elif isinstance(value, Element):
        shape, payload = value.shape, ("element", _blocks_raw(value))
    else:
        raise TypeError(f"cannot emit {type(value).__name__}")
    return {"schema_version": SCHEMA_VERSION, "algebra": {"blocks": list(shape.blocks)}, payload[0]: payload[1]}


def emit(value) -> str:
    doc = value if isinstance(value, dict) else to_document(value)
    return dumps(doc) + "\n"


def csv_header(shape: AlgebraShape) -> list[str]:
    cols = ["t", "trace", "min_eigenvalue", "rank"]
    cols += [f"eig_{i}" for i in range(shape.size)]
    for k, n in enumerate(shape.blocks):
        for i in range(n):
            for j in range(n):
                cols += [f"b{k}_{i}_{j}_re", f"b{k}_{i}_{j}_im"]
    return cols


def csv_row(p: GeodesicPoint) -> list[str]:
    eig = np.sort(np.concatenate(p.state.eigenvalues))
    row = [_num(p.t), _num(p.trace), _num(p.min_eigenvalue), str(p.rank.total)]
    row += [_num(x) for x in eig]
    for b in p.state.density.blocks:
        for z in b.reshape(-1):
            row += [_num(z.real), _num(z.imag)]
    return row


def emit_csv(samples: list[GeodesicPoint]) -> str:
    if not samples:
        raise InputError("nothing to write")
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(csv_header(samples[0].state.shape))
    for p in samples:
        w.writerow(csv_row(p))
    return buf.getvalue()
