"""Deterministic seed derivation."""

from __future__ import annotations

from typing import Union

import numpy as np

Seed = Union[int, tuple[int, ...]]


def seed_words(seed: Seed) -> tuple[int, ...]:
    if isinstance(seed, (int, np.integer)):
        return (int(seed),)
    return tuple(int(s) for s in seed)


def derive_seed(seed: Seed, *keys: int) -> tuple[int, ...]:
    """Child seed for ``keys`` under ``seed``; usable by ``numpy.random.default_rng``."""
    return seed_words(seed) + tuple(int(k) for k in keys)
