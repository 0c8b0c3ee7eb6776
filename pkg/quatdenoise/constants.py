"""Default constants and configuration values."""

# Numerics
PIVOT_RTOL = 1e-12          # solve_linear: pivot floor relative to max |entry|
JACOBI_TOL = 1e-12          # one-sided Jacobi rotation threshold
JACOBI_MAX_SWEEPS = 60
PAIRING_RTOL = 1e-8         # adjoint singular-value pairing
ADJOINT_SYMMETRY_RTOL = 1e-8
RANK_TOL_FACTOR = 16.0      # auto rank tol = max(M, N) * S1 * eps * factor
SKETCH_RANK_RTOL = 1e-10    # rank recheck inside clqa_brp after a singular solve

# Denoising defaults, keyed by noise level
SIGMA_SPLIT = 60.0
LOW_SIGMA_DEFAULTS = {"patch": 8, "group": 120, "rank": 7}    # sigma = 50 regime
HIGH_SIGMA_DEFAULTS = {"patch": 9, "group": 140, "rank": 9}   # sigma = 70 regime
DEFAULT_SIGMA = 50.0
DEFAULT_ROUNDS = 4
DEFAULT_DELTA = 0.1
DEFAULT_WINDOW = 30
DEFAULT_STRIDE = 4
DEFAULT_SEED = 0
DEFAULT_WORKERS = 1

# Images
PIXEL_MAX = 255.0
SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03

# File formats
QMAT_MAGIC = b"QMAT1"
QIMG_MAGIC = b"QIMGF1"
PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"
SIDECAR_SUFFIX = ".qimg"
MANIFEST_SUFFIX = ".manifest.toml"
CONFIG_FILENAME = "config.toml"

# Benchmark
BENCH_CSV_HEADER = ("M", "N", "r", "method", "median_seconds", "error")
BENCH_NOISE_LEVEL = 0.01

# Exit codes
EXIT_OK = 0
EXIT_COMPUTE = 1
EXIT_IO = 2
EXIT_VALIDATION = 3
