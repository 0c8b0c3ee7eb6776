"""quatdenoise: quaternion low-rank approximation and colour image denoising."""

__version__ = "0.1.0"
