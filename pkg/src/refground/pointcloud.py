"""Reader for colored point files (PLY subset: ascii and binary_little_endian).

Only the vertex element is decoded; other elements are ignored.  Vertices
must carry x, y, z and red, green, blue properties.  Extra scalar vertex
properties are decoded and discarded; list properties inside the vertex
element are rejected.
"""

from __future__ import annotations

import struct
from pathlib import Path

Point = tuple[tuple[float, float, float], tuple[int, int, int]]

_SCALAR_TYPES = {
    "char": "b", "int8": "b",
    "uchar": "B", "uint8": "B",
    "short": "h", "int16": "h",
    "ushort": "H", "uint16": "H",
    "int": "i", "int32": "i",
    "uint": "I", "uint32": "I",
    "float": "f", "float32": "f",
    "double": "d", "float64": "d",
}

_REQUIRED = ("x", "y", "z", "red", "green", "blue")


class PointFileError(ValueError):
    """Malformed, truncated, or unsupported point file."""


def _parse_header(lines: list[bytes]) -> tuple[str, int, list[tuple[str, str]]]:
    if not lines or lines[0].strip() != b"ply":
        raise PointFileError("not a PLY file (missing 'ply' magic)")
    fmt = None
    vertex_count = None
    properties: list[tuple[str, str]] = []
    in_vertex_element = False
    for raw in lines[1:]:
        parts = raw.decode("ascii", errors="replace").split()
        if not parts or parts[0] == "comment":
            continue
        if parts[0] == "format":
            if parts[1] not in ("ascii", "binary_little_endian"):
                raise PointFileError(f"unsupported format variant: {parts[1]}")
            fmt = parts[1]
        elif parts[0] == "element":
            in_vertex_element = parts[1] == "vertex"
            if in_vertex_element:
                vertex_count = int(parts[2])
        elif parts[0] == "property" and in_vertex_element:
            if parts[1] == "list":
                raise PointFileError("list properties in the vertex element are unsupported")
            if parts[1] not in _SCALAR_TYPES:
                raise PointFileError(f"unsupported property type: {parts[1]}")
            properties.append((parts[2], _SCALAR_TYPES[parts[1]]))
    if fmt is None:
        raise PointFileError("missing 'format' line in header")
    if vertex_count is None:
        raise PointFileError("missing 'element vertex' declaration")
    names = [n for n, _ in properties]
    for req in _REQUIRED:
        if req not in names:
            raise PointFileError(f"vertex element lacks required property '{req}'")
    return fmt, vertex_count, properties


def parse_points(path: str | Path) -> list[Point]:
    """Decode all vertices in file order as ((x, y, z), (r, g, b)) pairs."""
    data = Path(path).read_bytes()
    end = data.find(b"end_header")
    if end < 0:
        raise PointFileError("missing 'end_header'")
    header = data[:end].splitlines()
    fmt, count, properties = _parse_header(header)
    body_start = data.index(b"\n", end) + 1
    body = data[body_start:]
    idx = {name: i for i, (name, _) in enumerate(properties)}

    rows: list[list[float]] = []
    if fmt == "ascii":
        lines = body.decode("ascii", errors="replace").splitlines()
        lines = [ln for ln in lines if ln.strip()]
        if len(lines) < count:
            raise PointFileError(f"truncated payload: header declares {count} vertices, found {len(lines)}")
        for ln in lines[:count]:
            parts = ln.split()
            if len(parts) < len(properties):
                raise PointFileError(f"vertex line has {len(parts)} values, expected {len(properties)}")
            rows.append([float(v) for v in parts[: len(properties)]])
    else:
        fmt_str = "<" + "".join(code for _, code in properties)
        stride = struct.calcsize(fmt_str)
        if len(body) < stride * count:
            raise PointFileError(
                f"truncated payload: header declares {count} vertices, payload holds {len(body) // stride}"
            )
        for offset in range(0, stride * count, stride):
            rows.append([float(v) for v in struct.unpack_from(fmt_str, body, offset)])

    out: list[Point] = []
    for row in rows:
        pos = (row[idx["x"]], row[idx["y"]], row[idx["z"]])
        rgb = (int(row[idx["red"]]), int(row[idx["green"]]), int(row[idx["blue"]]))
        out.append((pos, rgb))
    return out
