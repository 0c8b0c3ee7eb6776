"""Quaternion bilateral random projections and the rank-constrained
approximation built on them.

For Y (M×N) and a Gaussian quaternion matrix A1 (N×r) the sketch is

    P1 = Y A1,  A2 = P1,  P2 = Y^H P1,  P1 = Y P2

and the rank-r estimate is P1 (A2^H P1)^-1 P2^H, formed with a linear solve.
When A2^H P1 turns out rank deficient the target rank drops to that rank and
the sketch is redrawn.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from quatdenoise.constants import SKETCH_RANK_RTOL
from quatdenoise.errors import ConfigError, RankOutOfRange, SingularMatrix
from quatdenoise.quaternion.matrix import (
    QMatrix,
    conj_transpose,
    frobenius_norm,
    matmul,
    random_gaussian_qmatrix,
)
from quatdenoise.quaternion.qsvd import auto_rank_tol, qsvd_values
from quatdenoise.quaternion.solve import solve_linear
from quatdenoise.util.seeding import Seed, derive_seed

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BrpConfig:
    """Settings for :func:`clqa_brp`.

    ``T`` is the number of independent sketches; the best one by residual is
    kept. ``rank_tol`` of None selects the automatic tolerance for the rank
    check on A2^H P1.
    """

    r: int
    T: int = 1
    seed: Seed = 0
    rank_tol: float | None = None

    def __post_init__(self) -> None:
        if self.r < 1:
            raise ConfigError(f"target rank must be >= 1, got {self.r}")
        if self.T < 1:
            raise ConfigError(f"iteration count T must be >= 1, got {self.T}")


@dataclass(frozen=True, eq=False)
class BrpSketch:
    P1: QMatrix
    P2: QMatrix
    A2: QMatrix
    effective_r: int


@dataclass(frozen=True, eq=False)
class BrpResult:
    X: QMatrix
    effective_r: int
    restarts: int
    residual: float


def _check_rank(y: QMatrix, r: int) -> None:
    if not 1 <= r <= min(y.shape):
        raise RankOutOfRange(r, y.shape)


def qbrp_sketch(y: QMatrix, r: int, seed: Seed) -> BrpSketch:
    """Left and right projections of ``y`` with one power step."""
    _check_rank(y, r)
    a1 = random_gaussian_qmatrix(y.cols, r, seed)
    p1 = matmul(y, a1)
    a2 = p1
    p2 = matmul(conj_transpose(y), p1)
    p1 = matmul(y, p2)
    return BrpSketch(P1=p1, P2=p2, A2=a2, effective_r=r)


def brp_reconstruct(sketch: BrpSketch) -> QMatrix:
    """P1 (A2^H P1)^-1 P2^H without forming the inverse."""
    core = matmul(conj_transpose(sketch.A2), sketch.P1)
    return matmul(sketch.P1, solve_linear(core, conj_transpose(sketch.P2)))


def sketch_rank(sketch: BrpSketch, tol: float | None = None, floored: bool = False) -> int:
    """Quaternion rank of A2^H P1.

    The automatic tolerance is max(M,N)·S1·eps·16. With ``floored`` it is
    raised to at least SKETCH_RANK_RTOL·S1: the matrix equals
    A1^H (Y^H Y)^2 A1, so its spectrum is Y's raised to the fourth power and
    values near that floor do not survive the elimination in the solve.
    """
    core = matmul(conj_transpose(sketch.A2), sketch.P1)
    values = qsvd_values(core)
    largest = float(values[0])
    if largest == 0.0:
        return 0
    if tol is None:
        tol = auto_rank_tol(core.shape, largest)
        if floored:
            tol = max(tol, SKETCH_RANK_RTOL * largest)
    return int(np.count_nonzero(values > tol))


def _try_reconstruct(sketch: BrpSketch, rank_tol: float | None) -> tuple[QMatrix | None, int]:
    """Reconstruct, or return the rank to retry with when the core is singular."""
    r = sketch.effective_r
    rank = sketch_rank(sketch, rank_tol)
    if rank >= r:
        try:
            return brp_reconstruct(sketch), r
        except SingularMatrix as exc:
            logger.debug("core solve failed at pivot %d, rechecking rank", exc.pivot_index)
            rank = min(sketch_rank(sketch, floored=True), r - 1)
    return None, rank


def clqa_brp_detailed(y: QMatrix, config: BrpConfig) -> BrpResult:
    _check_rank(y, config.r)
    best: BrpResult | None = None
    r = config.r
    restarts = 0

    for t in range(1, config.T + 1):
        attempt = 0
        while True:
            sketch = qbrp_sketch(y, r, derive_seed(config.seed, t, attempt))
            x, rank = _try_reconstruct(sketch, config.rank_tol)
            if x is not None:
                break
            logger.debug("sketch rank %d < %d, redrawing (restart %d)", rank, r, restarts + 1)
            restarts += 1
            attempt += 1
            r = rank
            if r == 0:
                # Y is numerically zero
                return BrpResult(QMatrix.zeros(*y.shape), 0, restarts, frobenius_norm(y))

        residual = frobenius_norm(y - x)
        if best is None or residual < best.residual:
            best = BrpResult(x, r, restarts, residual)

    return best


def clqa_brp(y: QMatrix, config: BrpConfig) -> QMatrix:
    """Rank-constrained approximation of ``y`` with rank at most ``config.r``."""
    return clqa_brp_detailed(y, config).X
