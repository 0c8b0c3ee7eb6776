"""Quaternion scalars and the plane-wise Hamilton product shared with matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def hamilton_planes(p, q):
    """Hamilton product of component 4-tuples (scalars or broadcastable arrays).

    ``p`` and ``q`` are indexable as ``(w, x, y, z)``. The left factor stays on
    the left. Returns a tuple of four components.
    """
    p0, p1, p2, p3 = p[0], p[1], p[2], p[3]
    q0, q1, q2, q3 = q[0], q[1], q[2], q[3]
    return (
        p0 * q0 - p1 * q1 - p2 * q2 - p3 * q3,
        p0 * q1 + p1 * q0 + p2 * q3 - p3 * q2,
        p0 * q2 - p1 * q3 + p2 * q0 + p3 * q1,
        p0 * q3 + p1 * q2 - p2 * q1 + p3 * q0,
    )


@dataclass(frozen=True)
class Quaternion:
    """A quaternion w + xi + yj + zk over 64-bit floats."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, values) -> Quaternion:
        w, x, y, z = (float(v) for v in values)
        return cls(w, x, y, z)

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z], dtype=np.float64)

    @property
    def is_pure(self) -> bool:
        return self.w == 0.0

    def conjugate(self) -> Quaternion:
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def modulus(self) -> float:
        return math.sqrt(self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z)

    def inverse(self) -> Quaternion:
        """q^-1 = q* / |q|^2. Raises ZeroDivisionError for q = 0."""
        n2 = self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
        if n2 == 0.0:
            raise ZeroDivisionError("inverse of zero quaternion")
        return Quaternion(self.w / n2, -self.x / n2, -self.y / n2, -self.z / n2)

    def __add__(self, other: Quaternion) -> Quaternion:
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: Quaternion) -> Quaternion:
        return Quaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> Quaternion:
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return hamilton_product(self, other)
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)
        return NotImplemented

    def __str__(self) -> str:
        return f"{self.w:+.6g}{self.x:+.6g}i{self.y:+.6g}j{self.z:+.6g}k"


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def hamilton_product(p: Quaternion, q: Quaternion) -> Quaternion:
    """Non-commutative product pq."""
    return Quaternion(*hamilton_planes((p.w, p.x, p.y, p.z), (q.w, q.x, q.y, q.z)))


def conjugate(q: Quaternion) -> Quaternion:
    return q.conjugate()


def modulus(q: Quaternion) -> float:
    return q.modulus()
