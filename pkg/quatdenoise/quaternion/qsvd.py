"""Quaternion SVD through the complex adjoint.

This is the reference path: exact truncation and rank queries used to check
the randomized approximation. It favours robustness over speed.

The adjoint of an M×N quaternion matrix (taken tall, transposing when M < N)
is QR-factorized with column pivoting and a one-sided Jacobi iteration
orthogonalizes the columns of R^H. Adjoint singular values come in equal
pairs; each pair collapses to one quaternion singular value. Singular vectors
are recovered from the complex right vectors through the inverse embedding,
with a quaternion Gram-Schmidt pass so that vectors drawn from a repeated
singular value stay orthogonal.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from quatdenoise.constants import (
    JACOBI_MAX_SWEEPS,
    JACOBI_TOL,
    PAIRING_RTOL,
    RANK_TOL_FACTOR,
)
from quatdenoise.errors import ConvergenceError, PairingError, RankOutOfRange
from quatdenoise.quaternion.adjoint import column_to_quaternion, to_adjoint
from quatdenoise.quaternion.matrix import QMatrix, conj_transpose, matmul

logger = logging.getLogger(__name__)

_ACCEPT_NORM = 0.5


@dataclass(frozen=True, eq=False)
class Qsvd:
    """Thin factorization Q = U diag(S) V^H.

    U is M×p, V is N×p with p = min(M, N); S is real, nonnegative and sorted
    in descending order.
    """

    U: QMatrix
    S: np.ndarray
    V: QMatrix

    def reconstruct(self, rank: int | None = None) -> QMatrix:
        r = len(self.S) if rank is None else rank
        left = QMatrix(self.U.planes[:, :, :r] * self.S[:r])
        return matmul(left, conj_transpose(self.V.columns(0, r)))


# -- complex one-sided Jacobi ---------------------------------------------------

@lru_cache(maxsize=64)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Tournament schedule: n-1 (or n) rounds of disjoint column pairs."""
    players = list(range(n)) + ([-1] if n % 2 else [])
    size = len(players)
    rounds = []
    for _ in range(size - 1):
        pairs = [
            (players[i], players[size - 1 - i])
            for i in range(size // 2)
            if players[i] >= 0 and players[size - 1 - i] >= 0
        ]
        p = np.array([min(a, b) for a, b in pairs], dtype=np.intp)
        q = np.array([max(a, b) for a, b in pairs], dtype=np.intp)
        rounds.append((p, q))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _jacobi_orthogonalize(x: np.ndarray) -> np.ndarray:
    """Rotate the columns of ``x`` until they are mutually orthogonal.

    Returns the rotated copy; its column norms are the singular values of
    ``x``. Disjoint pairs of one tournament round are rotated together.
    """
    x = np.array(x, dtype=np.complex128, copy=True)
    n = x.shape[1]
    if n < 2:
        return x
    schedule = _round_robin(n)
    off = 0.0
    for sweep in range(1, JACOBI_MAX_SWEEPS + 1):
        rotated = False
        off = 0.0
        for p, q in schedule:
            xp = x[:, p]
            xq = x[:, q]
            alpha = np.einsum("ij,ij->j", xp.conj(), xp).real
            beta = np.einsum("ij,ij->j", xq.conj(), xq).real
            gamma = np.einsum("ij,ij->j", xp.conj(), xq)
            g = np.abs(gamma)
            denom = np.sqrt(alpha * beta)
            ratio = np.divide(g, denom, out=np.zeros_like(g), where=denom > 0.0)
            off = max(off, float(ratio.max(initial=0.0)))
            active = ratio > JACOBI_TOL
            if not active.any():
                continue
            rotated = True
            p, q = p[active], q[active]
            alpha, beta, gamma, g = alpha[active], beta[active], gamma[active], g[active]

            zeta = (beta - alpha) / (2.0 * g)
            t = np.where(zeta >= 0.0, 1.0, -1.0) / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            phase = (gamma / g).conj()

            xp = x[:, p]
            xq = x[:, q] * phase
            x[:, p] = c * xp - s * xq
            x[:, q] = s * xp + c * xq
        if not rotated:
            logger.debug("Jacobi converged after %d sweeps (%d columns)", sweep, n)
            return x
    raise ConvergenceError(JACOBI_MAX_SWEEPS, off)


def _complex_right_svd(work: np.ndarray, vectors: bool = True):
    """Singular values (descending) of a tall complex matrix, and optionally
    its right singular vectors scaled by the singular values."""
    _, r, piv = scipy.linalg.qr(work, mode="economic", pivoting=True)
    rotated = _jacobi_orthogonalize(r.conj().T)
    norms = np.linalg.norm(rotated, axis=0)
    order = np.argsort(-norms, kind="stable")
    if not vectors:
        return norms[order], None
    right = np.empty_like(rotated)
    right[piv] = rotated
    return norms[order], right[:, order]


def _pair_values(adjoint_values: np.ndarray) -> np.ndarray:
    """Collapse the doubled adjoint spectrum to quaternion singular values."""
    first = adjoint_values[0::2]
    second = adjoint_values[1::2]
    scale = max(float(adjoint_values[0]) if adjoint_values.size else 0.0, np.finfo(float).tiny)
    gap = np.abs(first - second)
    bad = np.flatnonzero(gap > PAIRING_RTOL * scale)
    if bad.size:
        k = int(bad[0])
        raise PairingError(
            f"adjoint singular values {first[k]:.6e} and {second[k]:.6e} do not pair "
            f"(gap {gap[k]:.3e}, tolerance {PAIRING_RTOL * scale:.3e})"
        )
    return 0.5 * (first + second)


# -- quaternion Gram-Schmidt in adjoint coordinates ------------------------------

def _partner(c: np.ndarray) -> np.ndarray:
    """Second adjoint column of the quaternion vector with first column ``c``."""
    m = c.shape[0] // 2
    return np.concatenate([-c[m:].conj(), c[:m].conj()])


class _QuaternionBasis:
    """Orthonormal quaternion vectors held as their adjoint column pairs.

    Projecting a first column onto the span of both adjoint columns of every
    stored vector is the quaternion projection v - sum b (b^H v).
    """

    def __init__(self, length: int, capacity: int) -> None:
        self._cols = np.zeros((2 * length, 2 * capacity), dtype=np.complex128)
        self._slots: list[int] = []
        self.count = 0

    def try_add(self, c: np.ndarray, slot: int) -> bool:
        basis = self._cols[:, : 2 * self.count]
        for _ in range(2):
            c = c - basis @ (basis.conj().T @ c)
        norm = float(np.linalg.norm(c))
        if norm <= _ACCEPT_NORM:
            return False
        c = c / norm
        self._cols[:, 2 * self.count] = c
        self._cols[:, 2 * self.count + 1] = _partner(c)
        self._slots.append(slot)
        self.count += 1
        return True

    def complete(self, free_slots: list[int]) -> None:
        """Fill ``free_slots`` with standard basis vectors, orthogonalized."""
        length = self._cols.shape[0] // 2
        pending = list(free_slots)
        for i in range(length):
            if not pending:
                break
            e = np.zeros(2 * length, dtype=np.complex128)
            e[i] = 1.0
            if self.try_add(e, pending[0]):
                pending.pop(0)
        if pending:
            raise PairingError(f"could not complete quaternion basis ({len(pending)} slots left)")

    def first_columns(self) -> np.ndarray:
        """First adjoint columns of the stored vectors, ordered by slot."""
        order = np.argsort(self._slots, kind="stable")
        return self._cols[:, 0 : 2 * self.count : 2][:, order]

    def to_qmatrix(self) -> QMatrix:
        return column_to_quaternion(self.first_columns())


# -- public API -------------------------------------------------------------

def _tall(q: QMatrix) -> tuple[QMatrix, bool]:
    if q.rows < q.cols:
        return conj_transpose(q), True
    return q, False


def qsvd_values(q: QMatrix) -> np.ndarray:
    """Quaternion singular values only, descending."""
    qt, _ = _tall(q)
    values, _ = _complex_right_svd(to_adjoint(qt).entries, vectors=False)
    return _pair_values(values)


def qsvd(q: QMatrix) -> Qsvd:
    """Thin quaternion SVD, Q = U diag(S) V^H."""
    qt, transposed = _tall(q)
    work = to_adjoint(qt).entries
    adjoint_values, right = _complex_right_svd(work)
    values = _pair_values(adjoint_values)
    p = values.size
    m, n = qt.shape

    v_basis = _QuaternionBasis(n, p)
    for k in range(adjoint_values.size):
        if v_basis.count == p or adjoint_values[k] <= 0.0:
            break
        v_basis.try_add(right[:, k] / adjoint_values[k], v_basis.count)
    v_basis.complete(list(range(v_basis.count, p)))
    v_first = v_basis.first_columns()

    u_basis = _QuaternionBasis(m, p)
    deferred = []
    for k in range(p):
        if values[k] > 0.0:
            candidate = work @ v_first[:, k] / values[k]
            if u_basis.try_add(candidate, k):
                continue
        deferred.append(k)
    u_basis.complete(deferred)

    u = u_basis.to_qmatrix()
    v = v_basis.to_qmatrix()
    if transposed:
        return Qsvd(U=v, S=values, V=u)
    return Qsvd(U=u, S=values, V=v)


def truncated_qsvd(q: QMatrix, r: int) -> QMatrix:
    """Best rank-r approximation in the Frobenius norm."""
    if not 1 <= r <= min(q.shape):
        raise RankOutOfRange(r, q.shape)
    return qsvd(q).reconstruct(r)


def auto_rank_tol(shape: tuple[int, int], largest: float) -> float:
    return max(shape) * largest * np.finfo(np.float64).eps * RANK_TOL_FACTOR


def quaternion_rank(q: QMatrix, tol: float | None = None) -> int:
    """Number of singular values above ``tol`` (auto: max(M,N)·S1·eps·16)."""
    values = qsvd_values(q)
    if values[0] == 0.0:
        return 0
    if tol is None:
        tol = auto_rank_tol(q.shape, float(values[0]))
    return int(np.count_nonzero(values > tol))
