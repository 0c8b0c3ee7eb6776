"""Colour image files: 8-bit PNG through Pillow, and the QIMGF1 float sidecar.

QIMGF1 layout (little-endian):

    b"QIMGF1" | M: u64 | N: u64 | R, G, B planes as M*N float64 each, row-major
"""

from __future__ import annotations

import logging
import struct
from pathlib import Path

import numpy as np
from PIL import Image

from quatdenoise.constants import PNG_SIGNATURE, QIMG_MAGIC, SIDECAR_SUFFIX
from quatdenoise.denoise.image import ColorImageQ
from quatdenoise.errors import FormatError

logger = logging.getLogger(__name__)

_DIMS = struct.Struct("<QQ")
_HEADER_SIZE = len(QIMG_MAGIC) + _DIMS.size


def sidecar_path(path: str | Path) -> Path:
    return Path(path).with_suffix(SIDECAR_SUFFIX)


def is_png(path: str | Path) -> bool:
    with open(path, "rb") as f:
        return f.read(len(PNG_SIGNATURE)) == PNG_SIGNATURE


def read_png(path: str | Path) -> ColorImageQ:
    """Decode any Pillow-readable image as 8-bit RGB."""
    path = Path(path)
    with Image.open(path) as img:
        rgb = np.asarray(img.convert("RGB"))
    logger.info("Loaded image %s (%dx%d)", path, rgb.shape[0], rgb.shape[1])
    return ColorImageQ.from_rgb(rgb)


def write_png(image: ColorImageQ, path: str | Path) -> None:
    """Store as 8-bit RGB PNG (clipped and rounded)."""
    path = Path(path)
    Image.fromarray(image.to_uint8(), mode="RGB").save(path, format="PNG")
    logger.info("Wrote image %s (%dx%d)", path, image.height, image.width)


def read_qimg(path: str | Path) -> ColorImageQ:
    path = Path(path)
    data = path.read_bytes()
    if len(data) < len(QIMG_MAGIC) or data[: len(QIMG_MAGIC)] != QIMG_MAGIC:
        raise FormatError(str(path), 0, "missing QIMGF1 magic")
    if len(data) < _HEADER_SIZE:
        raise FormatError(str(path), len(data), "truncated header")
    rows, cols = _DIMS.unpack_from(data, len(QIMG_MAGIC))
    if rows == 0 or cols == 0:
        raise FormatError(str(path), len(QIMG_MAGIC), f"empty image {rows}x{cols}")
    expected = _HEADER_SIZE + 3 * rows * cols * 8
    if len(data) != expected:
        raise FormatError(
            str(path), min(len(data), expected),
            f"payload size {len(data) - _HEADER_SIZE} bytes, expected {expected - _HEADER_SIZE}",
        )
    planes = np.frombuffer(data, dtype="<f8", offset=_HEADER_SIZE).reshape(3, rows, cols)
    logger.info("Loaded float image %s (%dx%d)", path, rows, cols)
    return ColorImageQ.from_channels(planes.astype(np.float64))


def write_qimg(image: ColorImageQ, path: str | Path) -> None:
    path = Path(path)
    with open(path, "wb") as f:
        f.write(QIMG_MAGIC)
        f.write(_DIMS.pack(image.height, image.width))
        f.write(np.ascontiguousarray(image.channels, dtype="<f8").tobytes())
    logger.info("Wrote float image %s (%dx%d)", path, image.height, image.width)


def load_image(path: str | Path, use_sidecar: bool = True) -> ColorImageQ:
    """Read an image, detecting QIMGF1 by its magic.

    With ``use_sidecar``, a PNG whose ``.qimg`` sidecar exists is read from
    the sidecar, keeping values the 8-bit file had to clip.
    """
    path = Path(path)
    with open(path, "rb") as f:
        head = f.read(len(QIMG_MAGIC))
    if head == QIMG_MAGIC:
        return read_qimg(path)
    sidecar = sidecar_path(path)
    if use_sidecar and sidecar != path and sidecar.is_file():
        logger.info("Using float sidecar %s", sidecar)
        return read_qimg(sidecar)
    return read_png(path)


def save_image(image: ColorImageQ, path: str | Path, sidecar: bool = False) -> Path | None:
    """Write the PNG, and the unclipped float sidecar when asked. Returns the sidecar path."""
    write_png(image, path)
    if not sidecar:
        return None
    side = sidecar_path(path)
    write_qimg(image, side)
    return side
