"""Dense quaternion matrices stored as four real component planes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from quatdenoise.errors import DimensionMismatch
from quatdenoise.quaternion.scalar import Quaternion


@dataclass(frozen=True, eq=False)
class QMatrix:
    """An M×N quaternion matrix Q0 + Q1 i + Q2 j + Q3 k.

    ``planes`` has shape (4, M, N), float64; plane 0 is the real part. Treat
    instances as immutable: operations return new matrices.
    """

    planes: np.ndarray

    def __post_init__(self) -> None:
        planes = np.asarray(self.planes, dtype=np.float64)
        if planes.ndim != 3 or planes.shape[0] != 4:
            raise DimensionMismatch(f"expected planes of shape (4, M, N), got {planes.shape}")
        if planes.shape[1] < 1 or planes.shape[2] < 1:
            raise DimensionMismatch(f"empty quaternion matrix {planes.shape[1:]}")
        object.__setattr__(self, "planes", planes)

    # -- construction ------------------------------------------------------

    @classmethod
    def from_planes(cls, w, x, y, z) -> QMatrix:
        return cls(np.stack([np.asarray(p, dtype=np.float64) for p in (w, x, y, z)]))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> QMatrix:
        return cls(np.zeros((4, rows, cols)))

    @classmethod
    def identity(cls, n: int) -> QMatrix:
        planes = np.zeros((4, n, n))
        planes[0] = np.eye(n)
        return cls(planes)

    @classmethod
    def from_real(cls, real) -> QMatrix:
        real = np.atleast_2d(np.asarray(real, dtype=np.float64))
        planes = np.zeros((4,) + real.shape)
        planes[0] = real
        return cls(planes)

    @classmethod
    def from_quaternions(cls, rows: list[list[Quaternion]]) -> QMatrix:
        data = np.array([[q.as_array() for q in row] for row in rows], dtype=np.float64)
        return cls(np.moveaxis(data, 2, 0))

    # -- shape and access --------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.planes.shape[1], self.planes.shape[2]

    @property
    def rows(self) -> int:
        return self.planes.shape[1]

    @property
    def cols(self) -> int:
        return self.planes.shape[2]

    @property
    def w(self) -> np.ndarray:
        return self.planes[0]

    @property
    def x(self) -> np.ndarray:
        return self.planes[1]

    @property
    def y(self) -> np.ndarray:
        return self.planes[2]

    @property
    def z(self) -> np.ndarray:
        return self.planes[3]

    def entry(self, m: int, n: int) -> Quaternion:
        return Quaternion.from_array(self.planes[:, m, n])

    def columns(self, start: int, stop: int) -> QMatrix:
        return QMatrix(self.planes[:, :, start:stop].copy())

    def is_pure(self) -> bool:
        return not np.any(self.planes[0])

    def moduli(self) -> np.ndarray:
        """Entry-wise modulus, shape (M, N)."""
        return np.sqrt(np.sum(self.planes ** 2, axis=0))

    # -- algebra -----------------------------------------------------------

    def __add__(self, other: QMatrix) -> QMatrix:
        _check_same_shape(self, other, "add")
        return QMatrix(self.planes + other.planes)

    def __sub__(self, other: QMatrix) -> QMatrix:
        _check_same_shape(self, other, "subtract")
        return QMatrix(self.planes - other.planes)

    def __neg__(self) -> QMatrix:
        return QMatrix(-self.planes)

    def scale(self, factor: float) -> QMatrix:
        return QMatrix(self.planes * float(factor))

    def __matmul__(self, other: QMatrix) -> QMatrix:
        return matmul(self, other)

    @property
    def H(self) -> QMatrix:
        return conj_transpose(self)

    def frobenius_norm(self) -> float:
        return frobenius_norm(self)

    def allclose(self, other: QMatrix, atol: float = 1e-12) -> bool:
        return self.shape == other.shape and bool(np.allclose(self.planes, other.planes, rtol=0.0, atol=atol))


def _check_same_shape(a: QMatrix, b: QMatrix, op: str) -> None:
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot {op} {a.rows}x{a.cols} and {b.rows}x{b.cols}")


def _left_block(planes: np.ndarray) -> np.ndarray:
    """Real 4M×4K block acting as left multiplication by a quaternion matrix."""
    p0, p1, p2, p3 = planes
    return np.block([
        [p0, -p1, -p2, -p3],
        [p1, p0, -p3, p2],
        [p2, p3, p0, -p1],
        [p3, -p2, p1, p0],
    ])


def matmul(a: QMatrix, b: QMatrix) -> QMatrix:
    """Quaternion matrix product AB (Hamilton products, A on the left).

    The sixteen plane products are issued as one real GEMM on the block form
    of A against the stacked planes of B.
    """
    if a.cols != b.rows:
        raise DimensionMismatch(
            f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}: inner dimensions differ"
        )
    stacked = b.planes.reshape(4 * b.rows, b.cols)
    out = _left_block(a.planes) @ stacked
    return QMatrix(out.reshape(4, a.rows, b.cols))


def conj_transpose(a: QMatrix) -> QMatrix:
    planes = np.transpose(a.planes, (0, 2, 1)).copy()
    planes[1:] *= -1.0
    return QMatrix(planes)


def frobenius_norm(a: QMatrix) -> float:
    return float(np.sqrt(np.sum(a.planes * a.planes)))


def random_gaussian_qmatrix(rows: int, cols: int, seed) -> QMatrix:
    """Matrix with i.i.d. standard-normal entries in all four planes.

    ``seed`` is anything ``numpy.random.default_rng`` accepts, including a
    ``SeedSequence``; equal seeds give bit-identical matrices.
    """
    if rows < 1 or cols < 1:
        raise DimensionMismatch(f"random matrix needs positive dimensions, got {rows}x{cols}")
    rng = np.random.default_rng(seed)
    return QMatrix(rng.standard_normal((4, rows, cols)))


def random_lowrank_qmatrix(rows: int, cols: int, rank: int, seed) -> QMatrix:
    """Product of Gaussian rows×rank and rank×cols factors (rank ≤ ``rank``)."""
    ss = np.random.SeedSequence(seed) if not isinstance(seed, np.random.SeedSequence) else seed
    left_seed, right_seed = ss.spawn(2)
    return matmul(
        random_gaussian_qmatrix(rows, rank, left_seed),
        random_gaussian_qmatrix(rank, cols, right_seed),
    )
