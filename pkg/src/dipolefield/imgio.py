"""Netpbm codecs and lossless field serialization.

PGM (P5/P2) and PPM (P6) are the only image formats: they round-trip
bit-exactly without external codecs.  Writers always emit the canonical
form (maxval 255, single newline separators) so outputs are stable
golden files; the reader additionally tolerates arbitrary whitespace and
``#`` comments in headers.  Field exports are JSON or CSV with floats
printed at full precision, so import after export reproduces every
value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

import numpy as np

from .core import GrayImage, ScalarField, VectorField
from .render import RgbImage

__all__ = [
    "PnmParseError",
    "read_pgm",
    "write_pgm",
    "read_ppm",
    "write_ppm",
    "FieldExport",
    "export_field",
    "import_field",
]


class PnmParseError(ValueError):
    """Undecodable PGM/PPM input; ``offset`` is the byte where parsing failed."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


_WS = b" \t\r\n\x0b\x0c"


def _next_token(data: bytes, pos: int) -> tuple[bytes | None, int, int]:
    """Next header token after whitespace and # comments, or None at end.

    Returns (token, token_offset, position_after_token).
    """
    n = len(data)
    while pos < n:
        if data[pos] in _WS:
            pos += 1
        elif data[pos] == 0x23:  # '#' comment runs to end of line
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
        else:
            break
    if pos >= n:
        return None, n, n
    start = pos
    while pos < n and data[pos] not in _WS and data[pos] != 0x23:
        pos += 1
    return data[start:pos], start, pos


def _read_int(data: bytes, pos: int, what: str) -> tuple[int, int, int]:
    tok, start, pos = _next_token(data, pos)
    if tok is None:
        raise PnmParseError(f"truncated input while reading {what}", start)
    if not tok.isdigit():
        raise PnmParseError(f"malformed {what} {tok!r}", start)
    return int(tok), start, pos


def _read_header(data: bytes, magics: tuple[bytes, ...]) -> tuple[bytes, int, int, int]:
    """Parse magic, width, height, maxval; return them plus the raster offset."""
    magic, start, pos = _next_token(data, 0)
    if magic is None:
        raise PnmParseError("truncated input while reading magic", start)
    if magic not in magics:
        want = " or ".join(m.decode("ascii") for m in magics)
        raise PnmParseError(f"unsupported magic {magic!r}, want {want}", start)
    width, wstart, pos = _read_int(data, pos, "width")
    height, hstart, pos = _read_int(data, pos, "height")
    if width == 0:
        raise PnmParseError("zero width", wstart)
    if height == 0:
        raise PnmParseError("zero height", hstart)
    maxval, mstart, pos = _read_int(data, pos, "maxval")
    if maxval == 0:
        raise PnmParseError("zero maxval", mstart)
    if maxval > 255:
        raise PnmParseError(f"maxval {maxval} exceeds 255", mstart)
    return magic, width, height, pos


def _read_raster(data: bytes, pos: int, count: int) -> tuple[np.ndarray, int]:
    """Binary raster: one whitespace byte after maxval, then count raw samples."""
    if pos >= len(data) or data[pos] not in _WS:
        raise PnmParseError("missing whitespace before raster", pos)
    pos += 1
    if len(data) - pos < count:
        raise PnmParseError(
            f"truncated raster, need {count} bytes, have {len(data) - pos}", len(data)
        )
    return np.frombuffer(data, dtype=np.uint8, count=count, offset=pos), pos + count


def read_pgm(data: bytes) -> GrayImage:
    """Decode a binary (P5) or ASCII (P2) PGM buffer with maxval up to 255."""
    magic, width, height, pos = _read_header(data, (b"P5", b"P2"))
    count = width * height
    if magic == b"P5":
        flat, _ = _read_raster(data, pos, count)
    else:
        flat = np.empty(count, dtype=np.uint8)
        for k in range(count):
            val, vstart, pos = _read_int(data, pos, "sample")
            if val > 255:
                raise PnmParseError(f"sample {val} exceeds maxval", vstart)
            flat[k] = val
    return GrayImage(flat.reshape(height, width))


def write_pgm(img: GrayImage) -> bytes:
    """Encode as canonical binary PGM; read_pgm inverts this bit-exactly."""
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.pixels.tobytes()


def read_ppm(data: bytes) -> RgbImage:
    """Decode a binary (P6) PPM buffer with maxval up to 255."""
    _, width, height, pos = _read_header(data, (b"P6",))
    flat, _ = _read_raster(data, pos, width * height * 3)
    return RgbImage(flat.reshape(height, width, 3))


def write_ppm(img: RgbImage) -> bytes:
    """Encode as canonical binary PPM; read_ppm inverts this bit-exactly."""
    header = f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.pixels.tobytes()


@dataclass(frozen=True)
class FieldExport:
    """Serialized field plus the format tag needed to read it back."""

    format: str
    text: str


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def export_field(
    field: VectorField | ScalarField,
    format: str = "json",
    metadata: dict[str, Any] | None = None,
) -> FieldExport:
    """Serialize a field for downstream tools.

    JSON is one object with width, height, metadata, and flat row-major
    value arrays.  CSV is a fixed header (``i,j,px,py`` for vectors,
    ``i,j,value`` for scalars) then one row per pixel in raster order;
    the schema has no metadata slot, so ``metadata`` only reaches JSON.
    Floats carry 17 significant digits either way: import_field restores
    them exactly.
    """
    vector = isinstance(field, VectorField)
    if format == "json":
        doc: dict[str, Any] = {
            "kind": "vector" if vector else "scalar",
            "width": field.width,
            "height": field.height,
            "metadata": dict(metadata or {}),
        }
        if vector:
            doc["x"] = field.x.ravel().tolist()
            doc["y"] = field.y.ravel().tolist()
        else:
            doc["values"] = field.values.ravel().tolist()
        return FieldExport("json", json.dumps(doc) + "\n")
    if format == "csv":
        if vector:
            lines = ["i,j,px,py"]
            for i in range(field.height):
                for j in range(field.width):
                    lines.append(f"{i},{j},{_fmt(field.x[i, j])},{_fmt(field.y[i, j])}")
        else:
            lines = ["i,j,value"]
            for i in range(field.height):
                for j in range(field.width):
                    lines.append(f"{i},{j},{_fmt(field.values[i, j])}")
        return FieldExport("csv", "\n".join(lines) + "\n")
    raise ValueError(f"unknown export format {format!r}")


def import_field(export: FieldExport) -> VectorField | ScalarField:
    """Inverse of export_field for both formats."""
    if export.format == "json":
        doc = json.loads(export.text)
        h, w = int(doc["height"]), int(doc["width"])
        if doc["kind"] == "scalar":
            return ScalarField(np.asarray(doc["values"], dtype=np.float64).reshape(h, w))
        x = np.asarray(doc["x"], dtype=np.float64).reshape(h, w)
        y = np.asarray(doc["y"], dtype=np.float64).reshape(h, w)
        return VectorField(x, y)
    if export.format == "csv":
        lines = [ln for ln in export.text.splitlines() if ln]
        rows = [ln.split(",") for ln in lines[1:]]
        h = 1 + max(int(r[0]) for r in rows)
        w = 1 + max(int(r[1]) for r in rows)
        if lines[0] == "i,j,value":
            values = np.zeros((h, w))
            for r in rows:
                values[int(r[0]), int(r[1])] = float(r[2])
            return ScalarField(values)
        if lines[0] == "i,j,px,py":
            x = np.zeros((h, w))
            y = np.zeros((h, w))
            for r in rows:
                x[int(r[0]), int(r[1])] = float(r[2])
                y[int(r[0]), int(r[1])] = float(r[3])
            return VectorField(x, y)
        raise ValueError(f"unknown csv header {lines[0]!r}")
    raise ValueError(f"unknown export format {export.format!r}")
