"""PSNR and SSIM between colour images on the 8-bit scale."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from skimage.metrics import structural_similarity

from quatdenoise.constants import PIXEL_MAX, SSIM_K1, SSIM_K2, SSIM_SIGMA, SSIM_WINDOW
from quatdenoise.denoise.image import ColorImageQ
from quatdenoise.errors import DimensionMismatch, TooSmall


@dataclass(frozen=True)
class QualityReport:
    psnr: float  # dB, math.inf for identical images
    ssim: float

    def format_line(self) -> str:
        """``PSNR=<dB> SSIM=<value>``, as printed by the CLI."""
        psnr = "inf" if math.isinf(self.psnr) else f"{self.psnr:.4f}"
        return f"PSNR={psnr} SSIM={self.ssim:.6f}"


def _check_shapes(ref: ColorImageQ, test: ColorImageQ) -> None:
    if ref.shape != test.shape:
        raise DimensionMismatch(
            f"image sizes differ: {ref.shape[0]}x{ref.shape[1]} vs {test.shape[0]}x{test.shape[1]}"
        )


def psnr(ref: ColorImageQ, test: ColorImageQ) -> float:
    """10 log10(255² / MSE) over all 3·M·N samples; math.inf when MSE is 0."""
    _check_shapes(ref, test)
    mse = float(np.mean((ref.channels - test.channels) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(PIXEL_MAX**2 / mse)


def ssim(ref: ColorImageQ, test: ColorImageQ) -> float:
    """Gaussian-window SSIM per channel, averaged over channels and pixels."""
    _check_shapes(ref, test)
    if min(ref.shape) < SSIM_WINDOW:
        raise TooSmall(f"SSIM needs both sides >= {SSIM_WINDOW}, got {ref.shape[0]}x{ref.shape[1]}")
    if np.array_equal(ref.channels, test.channels):
        return 1.0
    return float(structural_similarity(
        ref.to_rgb(),
        test.to_rgb(),
        win_size=SSIM_WINDOW,
        gaussian_weights=True,
        sigma=SSIM_SIGMA,
        use_sample_covariance=False,
        K1=SSIM_K1,
        K2=SSIM_K2,
        data_range=PIXEL_MAX,
        channel_axis=-1,
    ))


def quality_report(ref: ColorImageQ, test: ColorImageQ) -> QualityReport:
    return QualityReport(psnr=psnr(ref, test), ssim=ssim(ref, test))
