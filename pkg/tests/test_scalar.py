import math

import numpy as np
import pytest

from quatdenoise.quaternion.scalar import (
    I,
    J,
    K,
    ONE,
    Quaternion,
    conjugate,
    hamilton_planes,
    hamilton_product,
    modulus,
)

MINUS_ONE = Quaternion(-1.0)


def test_unit_products_are_exact():
    assert I * I == MINUS_ONE
    assert J * J == MINUS_ONE
    assert K * K == MINUS_ONE
    assert I * J * K == MINUS_ONE


def test_products_do_not_commute():
    assert I * J == K
    assert J * I == -K
    assert J * K == I
    assert K * J == -I


def test_modulus_is_multiplicative(rng):
    p = rng.standard_normal((4, 10_000))
    q = rng.standard_normal((4, 10_000))
    pq = np.array(hamilton_planes(p, q))
    lhs = np.linalg.norm(pq, axis=0)
    rhs = np.linalg.norm(p, axis=0) * np.linalg.norm(q, axis=0)
    assert np.max(np.abs(lhs - rhs) / rhs) < 1e-12


def test_hamilton_product_matches_planes(rng):
    a, b = rng.standard_normal(4), rng.standard_normal(4)
    scalar = hamilton_product(Quaternion.from_array(a), Quaternion.from_array(b))
    np.testing.assert_allclose(scalar.as_array(), np.array(hamilton_planes(a, b)), rtol=0, atol=1e-15)


def test_conjugate_reverses_products(rng):
    p = Quaternion.from_array(rng.standard_normal(4))
    q = Quaternion.from_array(rng.standard_normal(4))
    left = conjugate(p * q).as_array()
    right = (conjugate(q) * conjugate(p)).as_array()
    np.testing.assert_allclose(left, right, atol=1e-14)


def test_inverse():
    q = Quaternion(1.0, 2.0, -2.0, 4.0)
    np.testing.assert_allclose((q * q.inverse()).as_array(), ONE.as_array(), atol=1e-15)
    np.testing.assert_allclose((q.inverse() * q).as_array(), ONE.as_array(), atol=1e-15)
    assert modulus(q) == pytest.approx(5.0)
    with pytest.raises(ZeroDivisionError):
        Quaternion().inverse()


def test_real_scaling_and_purity():
    q = Quaternion(0.0, 1.0, 2.0, 3.0)
    assert q.is_pure
    assert not ONE.is_pure
    assert 2 * q == q * 2 == Quaternion(0.0, 2.0, 4.0, 6.0)
    assert math.isclose((q - q).modulus(), 0.0)
