"""Linear solves over the quaternions."""

from __future__ import annotations

import logging

import numpy as np

from quatdenoise.constants import PIVOT_RTOL
from quatdenoise.errors import DimensionMismatch, SingularMatrix
from quatdenoise.quaternion.matrix import QMatrix
from quatdenoise.quaternion.scalar import hamilton_planes

logger = logging.getLogger(__name__)


def solve_linear(a: QMatrix, b: QMatrix) -> QMatrix:
    """Solve A·Z = B for Z by Gauss-Jordan elimination.

    Partial pivoting picks the largest entry modulus in the current column.
    Every row operation is a left multiplication, so the result satisfies
    A·Z = B (not Z·A = B). Raises SingularMatrix when a pivot modulus drops
    below ``PIVOT_RTOL`` times the largest initial entry modulus.
    """
    n = a.rows
    if a.cols != n:
        raise DimensionMismatch(f"solve_linear needs a square matrix, got {a.rows}x{a.cols}")
    if b.rows != n:
        raise DimensionMismatch(f"right-hand side has {b.rows} rows, matrix is {n}x{n}")

    lhs = a.planes.copy()
    rhs = b.planes.copy()
    floor = PIVOT_RTOL * float(a.moduli().max())

    for col in range(n):
        moduli = np.sqrt(np.sum(lhs[:, col:, col] ** 2, axis=0))
        pivot_row = col + int(np.argmax(moduli))
        pivot_mod = float(moduli[pivot_row - col])
        if pivot_mod == 0.0 or pivot_mod < floor:
            raise SingularMatrix(col, pivot_mod, floor)
        if pivot_row != col:
            lhs[:, [col, pivot_row]] = lhs[:, [pivot_row, col]]
            rhs[:, [col, pivot_row]] = rhs[:, [pivot_row, col]]
            logger.debug("pivot swap %d <-> %d", col, pivot_row)

        pivot = lhs[:, col, col]
        inverse = np.array([pivot[0], -pivot[1], -pivot[2], -pivot[3]]) / pivot_mod ** 2
        lhs[:, col, :] = hamilton_planes(inverse, lhs[:, col, :])
        rhs[:, col, :] = hamilton_planes(inverse, rhs[:, col, :])

        factors = lhs[:, :, col].copy()
        factors[:, col] = 0.0
        f = factors[:, :, None]
        lhs -= np.stack(hamilton_planes(f, lhs[:, col, None, :]))
        rhs -= np.stack(hamilton_planes(f, rhs[:, col, None, :]))

    return QMatrix(rhs)
