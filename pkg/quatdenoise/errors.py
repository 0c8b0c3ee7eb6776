"""Exception hierarchy. Every class carries the CLI exit code it maps to."""

from __future__ import annotations

from quatdenoise.constants import EXIT_COMPUTE, EXIT_IO, EXIT_VALIDATION


class QuatDenoiseError(Exception):
    """Base class for all library errors."""

    exit_code: int = EXIT_COMPUTE


# Validation (bad input or configuration)

class ValidationError(QuatDenoiseError):
    exit_code = EXIT_VALIDATION


class ConfigError(ValidationError, ValueError):
    """Configuration violates a documented invariant."""


class RankOutOfRange(ValidationError, ValueError):
    """Requested rank outside 1..min(M, N)."""

    def __init__(self, rank: int, shape: tuple[int, int]) -> None:
        self.rank = rank
        self.shape = shape
        super().__init__(
            f"rank {rank} out of range for {shape[0]}x{shape[1]} matrix "
            f"(need 1 <= r <= {min(shape)})"
        )


class DimensionMismatch(ValidationError, ValueError):
    """Operand shapes are not conformable."""


class WindowTooSmall(ValidationError):
    """Search window holds fewer candidate patches than the group size."""

    def __init__(self, candidates: int, needed: int, ref: tuple[int, int]) -> None:
        self.candidates = candidates
        self.needed = needed
        self.ref = ref
        super().__init__(
            f"search window around {ref} has {candidates} candidate patches, "
            f"need {needed}; enlarge the window or shrink the group"
        )


class TooSmall(ValidationError):
    """Image too small for the metric window."""


# Numerical failures

class ComputeError(QuatDenoiseError):
    exit_code = EXIT_COMPUTE


class SingularMatrix(ComputeError):
    """Pivot modulus fell below the elimination floor."""

    def __init__(self, pivot_index: int, pivot_modulus: float, floor: float) -> None:
        self.pivot_index = pivot_index
        self.pivot_modulus = pivot_modulus
        self.floor = floor
        super().__init__(
            f"singular matrix: pivot {pivot_index} has modulus {pivot_modulus:.3e} "
            f"below floor {floor:.3e}"
        )


class ConvergenceError(ComputeError):
    """Jacobi sweeps exceeded the cap."""

    def __init__(self, sweeps: int, off_norm: float) -> None:
        self.sweeps = sweeps
        self.off_norm = off_norm
        super().__init__(
            f"Jacobi SVD did not converge in {sweeps} sweeps (off-norm {off_norm:.3e})"
        )


class PairingError(ComputeError):
    """Adjoint singular values could not be matched into pairs."""


class AsymmetryError(ComputeError):
    """Complex matrix lacks the adjoint block structure."""

    def __init__(self, deviation: float, tolerance: float) -> None:
        self.deviation = deviation
        self.tolerance = tolerance
        super().__init__(
            f"not a complex adjoint: lower blocks deviate by {deviation:.3e} "
            f"(tolerance {tolerance:.3e})"
        )


class DegenerateInput(ComputeError):
    """Input is numerically zero. clqa_brp returns zeros instead of raising."""


# File formats

class FormatError(QuatDenoiseError):
    """Malformed binary file."""

    exit_code = EXIT_IO

    def __init__(self, path: str, offset: int, message: str) -> None:
        self.path = path
        self.offset = offset
        super().__init__(f"{path}: byte {offset}: {message}")
