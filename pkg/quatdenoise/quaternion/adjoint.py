"""Complex adjoint embedding of quaternion matrices.

A quaternion matrix Q = Q0 + Q1 i + Q2 j + Q3 k is split as Q = A + B j with
A = Q0 + Q1 i and B = Q2 + Q3 i, and represented by the 2M×2N complex matrix

    chi(Q) = [[ A,        B       ],
              [-conj(B),  conj(A) ]]

chi is a multiplicative homomorphism and chi(Q^H) = chi(Q)^H.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from quatdenoise.constants import ADJOINT_SYMMETRY_RTOL
from quatdenoise.errors import AsymmetryError, DimensionMismatch
from quatdenoise.quaternion.matrix import QMatrix


@dataclass(frozen=True, eq=False)
class ComplexAdjoint:
    """A 2M×2N complex matrix carrying the adjoint block structure."""

    entries: np.ndarray

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def quaternion_shape(self) -> tuple[int, int]:
        return self.rows // 2, self.cols // 2


def to_adjoint(q: QMatrix) -> ComplexAdjoint:
    a = q.w + 1j * q.x
    b = q.y + 1j * q.z
    return ComplexAdjoint(np.block([[a, b], [-b.conj(), a.conj()]]))


def from_adjoint(c: ComplexAdjoint | np.ndarray) -> QMatrix:
    """Inverse of :func:`to_adjoint`; reads A and B from the top block row.

    Raises AsymmetryError when the lower blocks deviate from
    [-conj(B), conj(A)] by more than ADJOINT_SYMMETRY_RTOL relative to the
    matrix norm.
    """
    entries = c.entries if isinstance(c, ComplexAdjoint) else np.asarray(c)
    rows, cols = entries.shape
    if rows % 2 or cols % 2:
        raise DimensionMismatch(f"adjoint must have even dimensions, got {rows}x{cols}")
    m, n = rows // 2, cols // 2
    a = entries[:m, :n]
    b = entries[:m, n:]

    deviation = float(np.sqrt(
        np.linalg.norm(entries[m:, :n] + b.conj()) ** 2
        + np.linalg.norm(entries[m:, n:] - a.conj()) ** 2
    ))
    tolerance = ADJOINT_SYMMETRY_RTOL * max(float(np.linalg.norm(entries)), np.finfo(float).tiny)
    if deviation > tolerance:
        raise AsymmetryError(deviation, tolerance)

    return QMatrix(np.stack([a.real, a.imag, b.real, b.imag]))


def column_to_quaternion(columns: np.ndarray) -> QMatrix:
    """Quaternion vectors whose adjoints have ``columns`` as first columns.

    For a complex 2M-vector [u1; u2] this is u1 - conj(u2) j. A (2M,) array
    gives an M×1 matrix, a (2M, k) array an M×k one.
    """
    if columns.ndim == 1:
        columns = columns[:, None]
    m = columns.shape[0] // 2
    a = columns[:m]
    b = -columns[m:].conj()
    return QMatrix(np.stack([a.real, a.imag, b.real, b.imag]))
