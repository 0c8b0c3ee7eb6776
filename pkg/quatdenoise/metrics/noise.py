"""Additive white Gaussian noise."""

from __future__ import annotations

import logging

import numpy as np

from quatdenoise.denoise.image import ColorImageQ
from quatdenoise.errors import ConfigError
from quatdenoise.util.seeding import Seed

logger = logging.getLogger(__name__)


def add_awgn(image: ColorImageQ, sigma: float, seed: Seed) -> ColorImageQ:
    """Add independent N(0, sigma²) noise to every colour channel. No clipping."""
    if sigma < 0:
        raise ConfigError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return ColorImageQ.from_channels(image.channels)
    rng = np.random.default_rng(seed)
    noise = rng.normal(0.0, sigma, size=image.channels.shape)
    logger.debug("AWGN sigma=%g seed=%s on %dx%d image", sigma, seed, *image.shape)
    return ColorImageQ.from_channels(image.channels + noise)
