"""Shared fixtures: seeded generators, synthetic colour images, QMatrix builders."""

from __future__ import annotations

import numpy as np
import pytest

from quatdenoise.denoise.image import ColorImageQ
from quatdenoise.quaternion.matrix import QMatrix


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


def random_qmatrix(rng: np.random.Generator, rows: int, cols: int) -> QMatrix:
    return QMatrix(rng.standard_normal((4, rows, cols)))


def smooth_image(height: int, width: int) -> ColorImageQ:
    """Slowly varying colour image with a few flat regions, values in [20, 235]."""
    yy, xx = np.mgrid[0:height, 0:width] / max(height, width)
    r = 128 + 90 * np.sin(2.0 * np.pi * xx)
    g = 60 + 150 * yy
    b = 200 - 120 * xx * yy
    b[height // 4 : height // 2, width // 4 : width // 2] = 90.0
    channels = np.clip(np.stack([r, g, b]), 20.0, 235.0)
    return ColorImageQ.from_channels(channels)


@pytest.fixture
def clean_image() -> ColorImageQ:
    return smooth_image(64, 64)


@pytest.fixture
def random_rgb(rng) -> np.ndarray:
    """24x32 8-bit RGB array."""
    return rng.integers(0, 256, size=(24, 32, 3), dtype=np.uint8)
