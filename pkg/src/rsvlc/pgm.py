"""Binary PGM (P5) image I/O, bit-exact for test fixtures.

Intensities in [0, 1] map to 8-bit grey levels via round(value * 255); a
write/read/write cycle reproduces the file byte for byte.
"""

from __future__ import annotations

import os

import numpy as np

MAXVAL = 255


def write_pgm(path: str | os.PathLike, image: np.ndarray) -> None:
    img = np.asarray(image, dtype=float)
    if img.ndim != 2:
        raise ValueError(f"image must be 2-D, got shape {img.shape}")
    if not np.all(np.isfinite(img)) or img.min() < 0 or img.max() > 1:
        raise ValueError("image values must be finite and within [0, 1]")
    rows, cols = img.shape
    # rint = round half to even; any fixed rule keeps the format bit-exact.
    raster = np.rint(img * MAXVAL).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{cols} {rows}\n{MAXVAL}\n".encode("ascii"))
        fh.write(raster.tobytes())


def read_pgm(path: str | os.PathLike) -> np.ndarray:
    """Read a maxval-255 binary PGM back into a float image in [0, 1]."""
    with open(path, "rb") as fh:
        data = fh.read()
    fields, offset = _header_fields(data)
    if fields[0] != b"P5":
        raise ValueError(f"not a binary PGM (P5) file: magic {fields[0]!r}")
    cols, rows, maxval = (int(x) for x in fields[1:4])
    if maxval != MAXVAL:
        raise ValueError(f"only maxval {MAXVAL} is supported, got {maxval}")
    expected = rows * cols
    raster = np.frombuffer(data, dtype=np.uint8, count=expected, offset=offset)
    if raster.size != expected:
        raise ValueError(f"truncated raster: expected {expected} bytes")
    return raster.reshape(rows, cols).astype(float) / MAXVAL


def _header_fields(data: bytes) -> tuple[list[bytes], int]:
    """Split off magic, width, height, maxval; skip '#' comments.

    Returns the four tokens and the byte offset where the raster starts
    (one whitespace character after the maxval token).
    """
    fields: list[bytes] = []
    i = 0
    while len(fields) < 4:
        if i >= len(data):
            raise ValueError("unexpected end of PGM header")
        ch = data[i : i + 1]
        if ch in b" \t\r\n":
            i += 1
        elif ch == b"#":
            while i < len(data) and data[i : i + 1] != b"\n":
                i += 1
        else:
            start = i
            while i < len(data) and data[i : i + 1] not in b" \t\r\n":
                i += 1
            fields.append(data[start:i])
    return fields, i + 1
