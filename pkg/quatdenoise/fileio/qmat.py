"""QMAT quaternion matrix files.

Layout (little-endian): b"QMAT1" | M: u64 | N: u64 | w, x, y, z planes,
each M*N float64 in row-major order.
"""

from __future__ import annotations

import logging
import struct
from pathlib import Path

import numpy as np

from quatdenoise.constants import QMAT_MAGIC
from quatdenoise.errors import FormatError
from quatdenoise.quaternion.matrix import QMatrix

logger = logging.getLogger(__name__)

_DIMS = struct.Struct("<QQ")
_HEADER_SIZE = len(QMAT_MAGIC) + _DIMS.size


def read_qmat(path: str | Path) -> QMatrix:
    path = Path(path)
    data = path.read_bytes()
    magic = data[: len(QMAT_MAGIC)]
    if magic != QMAT_MAGIC:
        # first differing byte
        offset = next(
            (i for i, (a, b) in enumerate(zip(magic, QMAT_MAGIC)) if a != b),
            len(magic),
        )
        raise FormatError(str(path), offset, "bad magic, expected QMAT1")
    if len(data) < _HEADER_SIZE:
        raise FormatError(str(path), len(data), "truncated header")
    rows, cols = _DIMS.unpack_from(data, len(QMAT_MAGIC))
    if rows == 0 or cols == 0:
        raise FormatError(str(path), len(QMAT_MAGIC), f"empty matrix {rows}x{cols}")
    expected = _HEADER_SIZE + 4 * rows * cols * 8
    if len(data) < expected:
        raise FormatError(str(path), len(data), f"truncated data, expected {expected} bytes")
    if len(data) > expected:
        raise FormatError(str(path), expected, f"{len(data) - expected} trailing bytes")
    planes = np.frombuffer(data, dtype="<f8", offset=_HEADER_SIZE).reshape(4, rows, cols)
    logger.info("Loaded QMAT %s (%dx%d)", path, rows, cols)
    return QMatrix(planes.astype(np.float64))


def write_qmat(q: QMatrix, path: str | Path) -> None:
    path = Path(path)
    with open(path, "wb") as f:
        f.write(QMAT_MAGIC)
        f.write(_DIMS.pack(q.rows, q.cols))
        f.write(np.ascontiguousarray(q.planes, dtype="<f8").tobytes())
    logger.info("Wrote QMAT %s (%dx%d)", path, q.rows, q.cols)
