"""Snapshot serialization and deterministic CSV/JSON report emission.

Snapshot format (bit-exact, little-endian):
    bytes 0..3   magic "ZKF1"
    bytes 4..11  u32 nx, u32 ny
    bytes 12..35 f64 Lx, f64 Ly, f64 t
    bytes 36..   nx*ny f64 field values, row-major (x-major: the ny values
                 of the first x row come first)

All floating-point text output is formatted with 17 significant digits, so
identical inputs produce byte-identical CSV/JSON artifacts.
"""

import struct

import numpy as np

from .errors import FormatError
from .grid import make_grid, RealField

MAGIC = b"ZKF1"
_HEADER = struct.Struct("<IIddd")


def write_snapshot(field, t, path):
    g = field.grid
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(_HEADER.pack(g.nx, g.ny, g.Lx, g.Ly, float(t)))
        fh.write(np.ascontiguousarray(field.values, dtype="<f8").tobytes())


def read_snapshot(path):
    """Returns (RealField, t)."""
    with open(path, "rb") as fh:
        blob = fh.read()
    return decode_snapshot(blob)


def decode_snapshot(blob):
    if blob[:4] != MAGIC:
        raise FormatError(f"bad magic {blob[:4]!r}, expected {MAGIC!r}")
    if len(blob) < 4 + _HEADER.size:
        raise FormatError("truncated snapshot header")
    nx, ny, Lx, Ly, t = _HEADER.unpack_from(blob, 4)
    body = blob[4 + _HEADER.size:]
    expected = nx * ny * 8
    if len(body) != expected:
        raise FormatError(f"truncated payload: {len(body)} bytes, expected {expected}")
    values = np.frombuffer(body, dtype="<f8").reshape(nx, ny).astype(float)
    grid = make_grid(nx, ny, Lx, Ly)
    return RealField(grid, values), float(t)


def snapshot_header(path):
    """Header fields without loading the payload."""
    with open(path, "rb") as fh:
        head = fh.read(4 + _HEADER.size)
    if head[:4] != MAGIC:
        raise FormatError(f"bad magic {head[:4]!r}, expected {MAGIC!r}")
    if len(head) < 4 + _HEADER.size:
        raise FormatError("truncated snapshot header")
    nx, ny, Lx, Ly, t = _HEADER.unpack_from(head, 4)
    return {"nx": nx, "ny": ny, "Lx": Lx, "Ly": Ly, "t": t}


def format_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    if v is None:
        return ""
    return str(v)


def write_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def dumps_json(obj, indent=0):
    """Deterministic JSON: sorted keys, floats at 17 significant digits."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{inner}"{k}": {dumps_json(obj[k], indent + 1)}' for k in sorted(obj)
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{inner}{dumps_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        if f != f:
            return "null"
        if f in (float("inf"), float("-inf")):
            return f'"{f}"'
        return f"{f:.17g}"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    text = str(obj).replace("\\", "\\\\").replace('"', '\\"')
    return f'"{text}"'


def write_json(path, obj):
    with open(path, "w") as fh:
        fh.write(dumps_json(obj) + "\n")
