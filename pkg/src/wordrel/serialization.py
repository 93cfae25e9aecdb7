"""Transform files: a JSON text form and a little-endian binary form.

Text form (UTF-8 JSON)::

    {"format": "wordrel-transform", "version": 1, "kind": "orthogonal",
     "dim": 300, "seed": 0, "n": 2000, "meta": {...},
     "coefficients": [row-major float64 values]}

Floats are written with Python's shortest round-trip repr, so reading a
text file back reproduces every coefficient exactly.

Binary form, all integers little-endian::

    offset  size  field
    0       4     magic b"WRTF"
    4       2     version (uint16, = 1)
    6       1     kind (uint8: 0 translative, 1 orthogonal, 2 linear)
    7       1     reserved (0)
    8       4     dim (uint32)
    12      8     seed (int64, -1 when absent)
    20      8     n (int64, -1 when absent)
    28      4     meta length L (uint32)
    32      L     meta, UTF-8 JSON object
    32+L    8*k   coefficients, float64 row-major (k = dim or dim*dim)
"""

from __future__ import annotations

import json
import os
import struct

import numpy as np

from .errors import TransformFormatError
from .transforms import LinearTransform, OrthogonalTransform, RelationshipTransform, TranslationVector

MAGIC = b"WRTF"
VERSION = 1
_HEADER = struct.Struct("<4sHBBIqqI")
_KIND_CODES = {"translative": 0, "orthogonal": 1, "linear": 2}
_CODE_KINDS = {v: k for k, v in _KIND_CODES.items()}


def _build(kind: str, dim: int, seed, n, coeffs: np.ndarray) -> RelationshipTransform:
    try:
        if kind == "translative":
            return TranslationVector(coeffs.reshape(dim))
        mat = coeffs.reshape(dim, dim)
        if kind == "orthogonal":
            return OrthogonalTransform(mat, seed=seed, n=n)
        if kind == "linear":
            return LinearTransform(mat, seed=seed, n=n)
    except ValueError as exc:
        raise TransformFormatError(str(exc)) from exc
    raise TransformFormatError(f"unknown transform kind {kind!r}")


def to_text(t: RelationshipTransform, meta: dict | None = None) -> str:
    record = {
        "format": "wordrel-transform",
        "version": VERSION,
        "kind": t.kind,
        "dim": t.dim,
        "seed": getattr(t, "seed", None),
        "n": getattr(t, "n", None),
        "meta": meta or {},
        "coefficients": [float(v) for v in t.coefficients.ravel()],
    }
    return json.dumps(record, indent=1) + "\n"


def from_text(text: str) -> RelationshipTransform:
    try:
        record = json.loads(text)
        if record.get("format") != "wordrel-transform":
            raise TransformFormatError("not a wordrel transform record")
        coeffs = np.array(record["coefficients"], dtype=np.float64)
        return _build(record["kind"], int(record["dim"]), record.get("seed"), record.get("n"), coeffs)
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise TransformFormatError(f"bad transform record: {exc}") from exc


def to_bytes(t: RelationshipTransform, meta: dict | None = None) -> bytes:
    seed = getattr(t, "seed", None)
    n = getattr(t, "n", None)
    meta_bytes = json.dumps(meta or {}, sort_keys=True).encode("utf-8")
    header = _HEADER.pack(
        MAGIC, VERSION, _KIND_CODES[t.kind], 0, t.dim,
        -1 if seed is None else seed, -1 if n is None else n, len(meta_bytes),
    )
    return header + meta_bytes + t.coefficients.astype("<f8").tobytes(order="C")


def from_bytes(data: bytes) -> RelationshipTransform:
    if len(data) < _HEADER.size:
        raise TransformFormatError("truncated transform header")
    magic, version, code, _, dim, seed, n, meta_len = _HEADER.unpack_from(data)
    if magic != MAGIC or version != VERSION:
        raise TransformFormatError("not a wordrel binary transform (bad magic/version)")
    if code not in _CODE_KINDS:
        raise TransformFormatError(f"unknown kind code {code}")
    kind = _CODE_KINDS[code]
    count = dim if kind == "translative" else dim * dim
    start = _HEADER.size + meta_len
    if len(data) != start + 8 * count:
        raise TransformFormatError("transform payload has the wrong length")
    coeffs = np.frombuffer(data, dtype="<f8", count=count, offset=start).astype(np.float64)
    return _build(kind, dim, None if seed < 0 else seed, None if n < 0 else n, coeffs)


def read_meta(path: str | os.PathLike) -> dict:
    data = open(path, "rb").read()
    if data.startswith(MAGIC):
        meta_len = _HEADER.unpack_from(data)[-1]
        return json.loads(data[_HEADER.size:_HEADER.size + meta_len])
    return json.loads(data).get("meta", {})


def save_transform(
    t: RelationshipTransform, path: str | os.PathLike, binary: bool = False, meta: dict | None = None
) -> None:
    if binary:
        with open(path, "wb") as fh:
            fh.write(to_bytes(t, meta))
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(to_text(t, meta))


def load_transform(path: str | os.PathLike) -> RelationshipTransform:
    """Read either form; the binary magic decides which."""
    try:
        data = open(path, "rb").read()
    except OSError as exc:
        raise TransformFormatError(f"cannot read transform file {os.fspath(path)}: {exc}") from exc
    if data.startswith(MAGIC):
        return from_bytes(data)
    try:
        return from_text(data.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise TransformFormatError(f"{os.fspath(path)}: not UTF-8 text") from exc
