"""Colour images as pure quaternion matrices (R i + G j + B k per pixel)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from quatdenoise.constants import PIXEL_MAX
from quatdenoise.errors import DimensionMismatch
from quatdenoise.quaternion.matrix import QMatrix


@dataclass(frozen=True, eq=False)
class ColorImageQ:
    """An M×N colour image; the real plane of ``pixels`` is identically zero."""

    pixels: QMatrix

    def __post_init__(self) -> None:
        if not self.pixels.is_pure():
            raise ValueError("colour image must be a pure quaternion matrix")

    @classmethod
    def from_channels(cls, channels: np.ndarray) -> ColorImageQ:
        """Build from a (3, M, N) float array of R, G, B planes."""
        channels = np.asarray(channels, dtype=np.float64)
        if channels.ndim != 3 or channels.shape[0] != 3:
            raise DimensionMismatch(f"expected (3, M, N) channels, got {channels.shape}")
        planes = np.zeros((4,) + channels.shape[1:])
        planes[1:] = channels
        return cls(QMatrix(planes))

    @classmethod
    def from_rgb(cls, rgb: np.ndarray) -> ColorImageQ:
        """Build from an (M, N, 3) array, e.g. a decoded 8-bit image."""
        rgb = np.asarray(rgb, dtype=np.float64)
        if rgb.ndim != 3 or rgb.shape[2] != 3:
            raise DimensionMismatch(f"expected (M, N, 3) RGB data, got {rgb.shape}")
        return cls.from_channels(np.moveaxis(rgb, 2, 0))

    @property
    def height(self) -> int:
        return self.pixels.rows

    @property
    def width(self) -> int:
        return self.pixels.cols

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape

    @property
    def channels(self) -> np.ndarray:
        """(3, M, N) view of the R, G, B planes."""
        return self.pixels.planes[1:]

    def to_rgb(self) -> np.ndarray:
        return np.moveaxis(self.channels, 0, 2).copy()

    def clipped(self) -> ColorImageQ:
        return ColorImageQ.from_channels(np.clip(self.channels, 0.0, PIXEL_MAX))

    def to_uint8(self) -> np.ndarray:
        """(M, N, 3) uint8 array, clipped and rounded."""
        return np.rint(np.clip(self.to_rgb(), 0.0, PIXEL_MAX)).astype(np.uint8)
