"""Patch-group denoising rounds with iterative regularization."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable

import numpy as np

from quatdenoise.config import DenoiseConfig
from quatdenoise.denoise.image import ColorImageQ
from quatdenoise.denoise.patches import (
    PatchGroup,
    accumulate,
    candidate_count,
    extract_group,
    finish,
    patch_view,
    reference_grid,
)
from quatdenoise.errors import TooSmall, WindowTooSmall
from quatdenoise.lowrank.qbrp import BrpConfig, clqa_brp
from quatdenoise.util.seeding import Seed, derive_seed

logger = logging.getLogger(__name__)

RoundCallback = Callable[[int, ColorImageQ], None]


def denoise_group(group: PatchGroup, config: DenoiseConfig, group_seed: Seed) -> PatchGroup:
    """Replace a group's data by its rank-``config.rank`` approximation."""
    estimate = clqa_brp(group.data, BrpConfig(r=config.rank, T=1, seed=group_seed))
    return group.with_data(estimate)


def _process_refs(
    channels: np.ndarray,
    refs: list[tuple[int, int]],
    first_index: int,
    config: DenoiseConfig,
    round_index: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Denoise the groups of ``refs`` and return their aggregation sums."""
    image = ColorImageQ.from_channels(channels)
    view = patch_view(image.channels, config.patch)
    groups = []
    for offset, ref in enumerate(refs):
        group = extract_group(image, ref, config, view=view)
        seed = derive_seed(config.seed, round_index, first_index + offset)
        groups.append(denoise_group(group, config, seed))
    return accumulate(groups, image.shape)


def _chunks(refs: list[tuple[int, int]], count: int) -> list[tuple[int, list[tuple[int, int]]]]:
    """Split refs into ``count`` contiguous chunks, each tagged with its start index."""
    bounds = np.linspace(0, len(refs), count + 1).astype(int)
    return [(int(a), refs[a:b]) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def _check_geometry(shape: tuple[int, int], refs: list[tuple[int, int]], config: DenoiseConfig) -> None:
    for ref in refs:
        found = candidate_count(ref, shape, config)
        if found < config.group:
            raise WindowTooSmall(found, config.group, ref)


def denoise_image(
    noisy: ColorImageQ,
    config: DenoiseConfig,
    workers: int = 1,
    on_round: RoundCallback | None = None,
) -> ColorImageQ:
    """Denoise a colour image in ``config.rounds`` rounds.

    Each round starts from y = x + delta * (noisy - x), where x is the
    previous round's estimate (the noisy image for round 1). Groups are taken
    from y, denoised and averaged back. Pixels not covered by any group keep
    their value in y. Channels are clipped to [0, 255] only on the final
    output.

    With ``workers > 1`` the reference grid is split into contiguous chunks
    processed in a process pool; partial sums are reduced in chunk order.
    ``on_round`` is called with (round index, unclipped estimate).
    """
    config.validate()
    height, width = noisy.shape
    if min(height, width) < config.patch:
        raise TooSmall(f"image {height}x{width} is smaller than patch size {config.patch}")
    refs = reference_grid(height, width, config.patch, config.stride)
    _check_geometry(noisy.shape, refs, config)

    logger.info(
        "Denoising %dx%d image: w=%d n=%d r=%d K=%d delta=%.3g, %d groups per round, %d worker(s)",
        height, width, config.patch, config.group, config.rank, config.rounds,
        config.delta, len(refs), workers,
    )

    source = noisy.channels
    estimate = source
    executor = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for k in range(1, config.rounds + 1):
            started = time.perf_counter()
            working = estimate + config.delta * (source - estimate)
            if executor is None:
                sums, counts = _process_refs(working, refs, 0, config, k)
            else:
                futures = [
                    executor.submit(_process_refs, working, chunk, start, config, k)
                    for start, chunk in _chunks(refs, workers)
                ]
                sums = np.zeros_like(working)
                counts = np.zeros(working.shape[1:])
                for future in futures:
                    part_sums, part_counts = future.result()
                    sums += part_sums
                    counts += part_counts
            current = finish(sums, counts, fallback=working)
            estimate = current.channels
            logger.info("Round %d/%d done in %.2fs", k, config.rounds, time.perf_counter() - started)
            if on_round is not None:
                on_round(k, current)
    finally:
        if executor is not None:
            executor.shutdown()

    return ColorImageQ.from_channels(estimate).clipped()
