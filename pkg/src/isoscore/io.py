"""Point-cloud file formats: plain CSV and the ISOPC1 binary layout.

Binary layout: 6-byte magic ``ISOPC1``, ``n`` as little-endian uint32,
``count`` as little-endian uint64, then ``count * n`` little-endian float64
values in row-major order.
"""

from __future__ import annotations

import os
import struct

import numpy as np

from .core import BadMagicError, ParseError, PointCloud, validate_point_cloud

MAGIC = b"ISOPC1"
HEADER = struct.Struct("<6sIQ")
FORMATS = ("auto", "csv", "binary")


def _data_lines(fh, header: bool):
    """Yield ``(line_number, text)`` for non-blank data lines."""
    for lineno, line in enumerate(fh, start=1):
        if header and lineno == 1:
            continue
        text = line.strip()
        if text:
            yield lineno, text


def read_csv(path: str | os.PathLike, header: bool = False) -> PointCloud:
    """Two passes: the first sizes the matrix and checks row lengths, the second fills it."""
    rows, width = 0, None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, text in _data_lines(fh, header):
            w = text.count(",") + 1
            if width is None:
                width = w
            elif w != width:
                raise ParseError(f"expected {width} fields, found {w}", lineno)
            rows += 1
    if width is None:
        raise ParseError("no data rows")

    out = np.empty((rows, width), dtype=np.float64)
    with open(path, "r", encoding="utf-8") as fh:
        for r, (lineno, text) in enumerate(_data_lines(fh, header)):
            try:
                out[r] = [float(tok) for tok in text.split(",")]
            except ValueError as exc:
                raise ParseError(f"non-numeric token ({exc})", lineno) from None
    return validate_point_cloud(out)


def write_csv(X: PointCloud, path: str | os.PathLike) -> None:
    # 17 significant digits round-trip every double exactly
    np.savetxt(path, validate_point_cloud(X).data, fmt="%.17g", delimiter=",")


def write_binary(X: PointCloud, path: str | os.PathLike) -> None:
    a = validate_point_cloud(X).data
    with open(path, "wb") as fh:
        fh.write(HEADER.pack(MAGIC, a.shape[1], a.shape[0]))
        fh.write(np.ascontiguousarray(a, dtype="<f8").tobytes())


def read_binary(path: str | os.PathLike) -> PointCloud:
    with open(path, "rb") as fh:
        head = fh.read(HEADER.size)
        if len(head) < HEADER.size or head[:6] != MAGIC:
            raise BadMagicError(f"{path}: not an ISOPC1 file")
        _, n, count = HEADER.unpack(head)
        expected = 8 * n * count
        payload = os.fstat(fh.fileno()).st_size - HEADER.size
        if payload != expected:
            raise ParseError(f"payload is {payload} bytes, header implies {expected}")
        a = np.fromfile(fh, dtype="<f8", count=n * count).reshape(count, n)
    return validate_point_cloud(a.astype(np.float64, copy=False))


def detect_format(path: str | os.PathLike) -> str:
    with open(path, "rb") as fh:
        return "binary" if fh.read(len(MAGIC)) == MAGIC else "csv"


def read_cloud(path: str | os.PathLike, fmt: str = "auto", header: bool = False) -> PointCloud:
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    if fmt == "auto":
        fmt = detect_format(path)
    return read_binary(path) if fmt == "binary" else read_csv(path, header=header)


def write_cloud(X: PointCloud, path: str | os.PathLike, fmt: str = "auto") -> str:
    """Write ``X``; ``auto`` picks binary for ``.bin`` paths and CSV otherwise."""
    if fmt == "auto":
        fmt = "binary" if str(path).endswith(".bin") else "csv"
    (write_binary if fmt == "binary" else write_csv)(X, path)
    return fmt
