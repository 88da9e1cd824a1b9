"""Binary and JSON file formats for fields (CFLD) and wavelet coefficient tensors (CWTT).

Layout of both binary formats::

    8 bytes   magic, b"CFLD0001" or b"CWTT0001"
    4 bytes   little-endian uint32 length L of the header
    L bytes   UTF-8 JSON header, keys sorted, no whitespace
    rest      complex128 payload, little-endian (re, im) pairs,
              point-major, blade-minor, row-major

A CWTT payload is the concatenation of one CFLD payload per
(scale, spin) slice, scales outermost.
"""

from __future__ import annotations

import json
import os
import struct
import tempfile
from pathlib import Path

import numpy as np

from .grid import CliffordField, GridSpec

CFIELD_MAGIC = b"CFLD0001"
CWT_MAGIC = b"CWTT0001"
ORDER = "point-major, blade-minor, row-major"
DTYPE = "c128"
JSON_LIMIT = 100_000
_LEN = struct.Struct("<I")


class FileFormatError(ValueError):
    """Malformed file; ``offset`` is the byte position where parsing failed."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


def atomic_write(path, payload: bytes):
    """Write ``payload`` to a temporary file next to ``path`` and rename it into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dumps_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def field_header(f: CliffordField) -> dict:
    header = f.grid.to_header()
    header.update(blades=1 << f.n, dtype=DTYPE, order=ORDER, domain=f.domain)
    if f.domain == "frequency" and f.dual is not None:
        header["space_origin"] = list(f.dual.origin)
        header["space_spacing"] = list(f.dual.spacing)
    return header


def _pack(magic: bytes, header: dict, payload: np.ndarray) -> bytes:
    head = dumps_json(header).encode("utf-8")
    return magic + _LEN.pack(len(head)) + head + np.ascontiguousarray(payload, dtype="<c16").tobytes()


def _unpack(raw: bytes, magic: bytes) -> tuple[dict, bytes, int]:
    if len(raw) < len(magic) or raw[: len(magic)] != magic:
        found = raw[: len(magic)]
        raise FileFormatError(f"bad magic {found!r}, expected {magic!r}", 0)
    pos = len(magic)
    if len(raw) < pos + _LEN.size:
        raise FileFormatError("truncated header length", pos)
    (length,) = _LEN.unpack_from(raw, pos)
    pos += _LEN.size
    if len(raw) < pos + length:
        raise FileFormatError(f"header claims {length} bytes but file ends early", pos)
    try:
        header = json.loads(raw[pos : pos + length].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"header is not valid UTF-8 JSON: {exc}", pos) from None
    if not isinstance(header, dict):
        raise FileFormatError("header must be a JSON object", pos)
    return header, raw[pos + length :], pos + length


def _grid_from_header(header: dict, offset: int) -> tuple[GridSpec, CliffordField | None]:
    for key in ("n", "shape", "spacing", "origin", "blades", "dtype"):
        if key not in header:
            raise FileFormatError(f"header is missing {key!r}", offset)
    if header["dtype"] != DTYPE:
        raise FileFormatError(f"unsupported dtype {header['dtype']!r}", offset)
    try:
        grid = GridSpec(header["shape"], header["spacing"], header["origin"])
    except (TypeError, ValueError) as exc:
        raise FileFormatError(f"invalid grid in header: {exc}", offset) from None
    if grid.n != header["n"] or header["blades"] != 1 << grid.n:
        raise FileFormatError("header n/blades inconsistent with shape", offset)
    dual = None
    if header.get("domain") == "frequency" and "space_origin" in header:
        dual = GridSpec(header["shape"], header["space_spacing"], header["space_origin"])
    return grid, dual


def _payload_array(body: bytes, shape: tuple, offset: int) -> np.ndarray:
    expected = int(np.prod(shape)) * 16
    if len(body) != expected:
        raise FileFormatError(f"payload has {len(body)} bytes, expected {expected}", offset)
    return np.frombuffer(body, dtype="<c16").reshape(shape).astype(np.complex128)


def field_to_bytes(f: CliffordField) -> bytes:
    return _pack(CFIELD_MAGIC, field_header(f), f.data)


def field_from_bytes(raw: bytes) -> CliffordField:
    if raw[:1] == b"{":
        return _field_from_json(raw)
    header, body, offset = _unpack(raw, CFIELD_MAGIC)
    grid, dual = _grid_from_header(header, len(CFIELD_MAGIC) + _LEN.size)
    data = _payload_array(body, grid.shape + (1 << grid.n,), offset)
    return CliffordField(grid, data, domain=header.get("domain", "space"), dual=dual)


def field_to_json(f: CliffordField) -> str:
    if f.data.size > JSON_LIMIT:
        raise ValueError(f"JSON variant is limited to {JSON_LIMIT} complex values, field has {f.data.size}")
    header = field_header(f)
    pairs = np.stack([f.data.real, f.data.imag], axis=-1)
    header["data"] = pairs.tolist()
    return dumps_json(header)


def _field_from_json(raw: bytes) -> CliffordField:
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"invalid JSON field: {exc}", 0) from None
    grid, dual = _grid_from_header(doc, 0)
    if "data" not in doc:
        raise FileFormatError("JSON field has no 'data' array", 0)
    pairs = np.asarray(doc["data"], dtype=float)
    shape = grid.shape + (1 << grid.n, 2)
    if pairs.shape != shape:
        raise FileFormatError(f"data has shape {pairs.shape}, expected {shape}", 0)
    if pairs[..., 0].size > JSON_LIMIT:
        raise FileFormatError(f"JSON variant is limited to {JSON_LIMIT} complex values", 0)
    return CliffordField(grid, pairs[..., 0] + 1j * pairs[..., 1], domain=doc.get("domain", "space"), dual=dual)


def save_field(path, f: CliffordField, as_json: bool = False):
    payload = field_to_json(f).encode("utf-8") if as_json else field_to_bytes(f)
    atomic_write(path, payload)


def load_field(path) -> CliffordField:
    return field_from_bytes(Path(path).read_bytes())


def tensor_to_bytes(tensor) -> bytes:
    g = tensor.grid
    header = {
        "scales": [float(a) for a in g.scales],
        "scale_weights": [float(w) for w in g.log_weights],
        "spin_nodes": g.spins.coefficient_array().tolist(),
        "spin_weights": [float(w) for w in g.spins.weights],
        "field": g.translations.to_header() | {"blades": 1 << g.n, "dtype": DTYPE, "order": ORDER},
        "layout": "scale, spin, then field payload",
    }
    return _pack(CWT_MAGIC, header, tensor.coefficients)


def tensor_from_bytes(raw: bytes):
    from .algebra import Multivector
    from .cwt import CWTGrid, CWTTensor
    from .spin import SpinQuadrature, Spinor

    header, body, offset = _unpack(raw, CWT_MAGIC)
    head_off = len(CWT_MAGIC) + _LEN.size
    for key in ("scales", "scale_weights", "spin_nodes", "spin_weights", "field"):
        if key not in header:
            raise FileFormatError(f"header is missing {key!r}", head_off)
    grid, _ = _grid_from_header(header["field"], head_off)
    try:
        nodes = tuple(Spinor(Multivector(grid.n, c)) for c in header["spin_nodes"])
        spins = SpinQuadrature(nodes, np.asarray(header["spin_weights"], dtype=float))
        cgrid = CWTGrid(np.asarray(header["scales"], dtype=float), np.asarray(header["scale_weights"], dtype=float), spins, grid)
    except ValueError as exc:
        raise FileFormatError(f"invalid CWT grid: {exc}", head_off) from None
    shape = (len(cgrid.scales), len(spins)) + grid.shape + (1 << grid.n,)
    return CWTTensor(cgrid, _payload_array(body, shape, offset))


def save_tensor(path, tensor):
    atomic_write(path, tensor_to_bytes(tensor))


def load_tensor(path):
    return tensor_from_bytes(Path(path).read_bytes())
