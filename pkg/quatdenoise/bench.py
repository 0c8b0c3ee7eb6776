"""Timing harness: randomized low-rank approximation against the exact QSVD truncation."""

from __future__ import annotations

import csv
import logging
import statistics
import time
from dataclasses import astuple, dataclass
from pathlib import Path
from typing import Callable

from quatdenoise.constants import BENCH_CSV_HEADER, BENCH_NOISE_LEVEL
from quatdenoise.errors import ConfigError
from quatdenoise.lowrank.qbrp import BrpConfig, clqa_brp
from quatdenoise.quaternion.matrix import (
    QMatrix,
    frobenius_norm,
    random_gaussian_qmatrix,
    random_lowrank_qmatrix,
)
from quatdenoise.quaternion.qsvd import truncated_qsvd
from quatdenoise.util.seeding import Seed, derive_seed

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BenchRow:
    M: int
    N: int
    r: int
    method: str
    median_seconds: float
    error: float  # relative Frobenius error of the last repeat


def parse_size(text: str) -> tuple[int, int]:
    """``"512"`` → (512, 512); ``"256x128"`` → (256, 128)."""
    parts = text.lower().split("x")
    try:
        dims = tuple(int(p) for p in parts)
    except ValueError:
        raise ConfigError(f"bad size {text!r}, expected N or MxN") from None
    if len(dims) == 1:
        dims = dims * 2
    if len(dims) != 2 or min(dims) < 1:
        raise ConfigError(f"bad size {text!r}, expected N or MxN")
    return dims


def bench_matrix(rows: int, cols: int, r: int, seed: Seed) -> QMatrix:
    """Rank-r signal plus small Gaussian noise, scaled to the signal norm."""
    signal = random_lowrank_qmatrix(rows, cols, r, derive_seed(seed, 0))
    noise = random_gaussian_qmatrix(rows, cols, derive_seed(seed, 1))
    scale = BENCH_NOISE_LEVEL * frobenius_norm(signal) / frobenius_norm(noise)
    return signal + noise.scale(scale)


def _time(fn: Callable[[], QMatrix], repeats: int) -> tuple[float, QMatrix]:
    times = []
    result = None
    for _ in range(repeats):
        started = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - started)
    return statistics.median(times), result


def run_benchmark(
    sizes: list[tuple[int, int]],
    r: int,
    repeats: int = 3,
    seed: Seed = 0,
    methods: tuple[str, ...] = ("clqa_brp", "truncated_qsvd"),
    oracle_repeats: int = 1,
) -> list[BenchRow]:
    """Median wall time and error of each method on one test matrix per size.

    The exact truncation is timed ``oracle_repeats`` times; it dominates the
    run time from a few hundred rows on.
    """
    if repeats < 1 or oracle_repeats < 1:
        raise ConfigError(f"repeats must be >= 1, got {repeats} and {oracle_repeats}")
    runners = {
        "clqa_brp": lambda y: clqa_brp(y, BrpConfig(r=r, T=1, seed=seed)),
        "truncated_qsvd": lambda y: truncated_qsvd(y, r),
    }
    unknown = set(methods) - set(runners)
    if unknown:
        raise ConfigError(f"unknown benchmark methods: {', '.join(sorted(unknown))}")

    rows = []
    for index, (m, n) in enumerate(sizes):
        y = bench_matrix(m, n, r, derive_seed(seed, index))
        norm = frobenius_norm(y)
        for method in methods:
            run = runners[method]
            count = oracle_repeats if method == "truncated_qsvd" else repeats
            median, x = _time(lambda: run(y), count)
            error = frobenius_norm(y - x) / norm
            row = BenchRow(m, n, r, method, median, error)
            logger.info("%dx%d r=%d %s: median %.4fs, error %.3e", m, n, r, method, median, error)
            rows.append(row)
    return rows


def write_csv(rows: list[BenchRow], path: str | Path) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(BENCH_CSV_HEADER)
        for row in rows:
            writer.writerow(astuple(row))
    logger.info("Wrote %d benchmark rows to %s", len(rows), path)
