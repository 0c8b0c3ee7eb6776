"""Patch grouping by nonlocal similarity, and aggregation back to an image.

Patches are vectorized column-major (entry index = col * w + row) with each
quaternion pixel kept whole; a group is the w²×n quaternion matrix of its
patches, reference patch in column 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from quatdenoise.config import DenoiseConfig
from quatdenoise.denoise.image import ColorImageQ
from quatdenoise.errors import DimensionMismatch, WindowTooSmall
from quatdenoise.quaternion.matrix import QMatrix


@dataclass(frozen=True, eq=False)
class PatchGroup:
    """n similar patches as columns of a w²×n quaternion matrix."""

    data: QMatrix
    coords: list[tuple[int, int]]
    ref_index: int = 0

    @property
    def patch_size(self) -> int:
        return int(round(np.sqrt(self.data.rows)))

    def with_data(self, data: QMatrix) -> PatchGroup:
        return PatchGroup(data=data, coords=self.coords, ref_index=self.ref_index)


def reference_grid(height: int, width: int, patch: int, stride: int) -> list[tuple[int, int]]:
    """Reference positions on a stride grid, always including the last row/column."""
    rows = list(range(0, height - patch + 1, stride))
    cols = list(range(0, width - patch + 1, stride))
    if rows[-1] != height - patch:
        rows.append(height - patch)
    if cols[-1] != width - patch:
        cols.append(width - patch)
    return [(r, c) for r in rows for c in cols]


def search_range(ref: int, extent: int, patch: int, window: int) -> tuple[int, int]:
    """Inclusive range of candidate top-left coordinates along one axis.

    The window of side ``window`` is centred on the reference patch and
    clipped to the image; candidates must lie fully inside it.
    """
    top = ref - (window - patch) // 2
    bottom = top + window
    top = max(0, top)
    bottom = min(extent, bottom)
    return top, bottom - patch


def candidate_count(ref: tuple[int, int], shape: tuple[int, int], config: DenoiseConfig) -> int:
    r0, r1 = search_range(ref[0], shape[0], config.patch, config.window)
    c0, c1 = search_range(ref[1], shape[1], config.patch, config.window)
    return max(0, r1 - r0 + 1) * max(0, c1 - c0 + 1)


def patch_view(channels: np.ndarray, patch: int) -> np.ndarray:
    """Read-only view (M-w+1, N-w+1, 3, w, w) of every patch of a (3, M, N) image."""
    view = sliding_window_view(channels, (patch, patch), axis=(1, 2))
    return np.moveaxis(view, 0, 2)


def vectorize(patches: np.ndarray) -> np.ndarray:
    """(n, 3, w, w) patches → (4, w², n) quaternion planes with zero real part."""
    n, _, w, _ = patches.shape
    vecs = np.swapaxes(patches, 2, 3).reshape(n, 3, w * w)
    planes = np.zeros((4, w * w, n))
    planes[1:] = np.transpose(vecs, (1, 2, 0))
    return planes


def extract_group(
    image: ColorImageQ,
    ref: tuple[int, int],
    config: DenoiseConfig,
    view: np.ndarray | None = None,
) -> PatchGroup:
    """The ``config.group`` patches nearest to the reference patch at ``ref``.

    Distance is the squared Frobenius distance between patch vectors; ties
    go to the earlier candidate in row-major order. ``view`` may pass a
    precomputed :func:`patch_view` of the same image.
    """
    w, n = config.patch, config.group
    height, width = image.shape
    r, c = ref
    if not (0 <= r <= height - w and 0 <= c <= width - w):
        raise DimensionMismatch(f"reference patch {ref} out of bounds for {height}x{width} image")
    if view is None:
        view = patch_view(image.channels, w)

    r0, r1 = search_range(r, height, w, config.window)
    c0, c1 = search_range(c, width, w, config.window)
    candidates = view[r0 : r1 + 1, c0 : c1 + 1]
    rows, cols = candidates.shape[:2]
    if rows * cols < n:
        raise WindowTooSmall(rows * cols, n, ref)

    flat = candidates.reshape(rows * cols, 3, w, w)
    diff = flat - view[r, c]
    distances = np.einsum("kcij,kcij->k", diff, diff)
    ref_index = (r - r0) * cols + (c - c0)
    order = np.argsort(distances, kind="stable")
    chosen = [ref_index] + [int(i) for i in order if i != ref_index][: n - 1]

    coords = [(r0 + i // cols, c0 + i % cols) for i in chosen]
    data = QMatrix(vectorize(flat[chosen]))
    return PatchGroup(data=data, coords=coords)


def accumulate(groups: list[PatchGroup], shape: tuple[int, int]) -> tuple[np.ndarray, np.ndarray]:
    """Per-pixel sums (3, M, N) and contribution counts (M, N) of all patches."""
    height, width = shape
    sums = np.zeros((3, height, width))
    counts = np.zeros((height, width))
    for group in groups:
        w = group.patch_size
        n = group.data.cols
        coords = np.asarray(group.coords)
        rows = coords[:, 0, None, None] + np.arange(w)[None, :, None]
        cols = coords[:, 1, None, None] + np.arange(w)[None, None, :]
        # column j of data is patch j, stored column-major
        patches = group.data.planes[1:].reshape(3, w, w, n)
        patches = np.transpose(patches, (0, 3, 2, 1))
        for ch in range(3):
            np.add.at(sums[ch], (rows, cols), patches[ch])
        np.add.at(counts, (rows, cols), 1.0)
    return sums, counts


def finish(sums: np.ndarray, counts: np.ndarray, fallback: np.ndarray | None = None) -> ColorImageQ:
    """Divide sums by counts; uncovered pixels take ``fallback`` (3, M, N) or 0."""
    covered = counts > 0
    out = np.zeros_like(sums) if fallback is None else np.array(fallback, dtype=np.float64, copy=True)
    out[:, covered] = sums[:, covered] / counts[covered]
    return ColorImageQ.from_channels(out)


def aggregate(
    groups: list[PatchGroup],
    dims: tuple[int, int],
    fallback: ColorImageQ | None = None,
) -> ColorImageQ:
    """Average every patch instance back into an image of size ``dims``.

    The real part of the patch data is dropped, so the result is pure.
    """
    for group in groups:
        w = group.patch_size
        for r, c in group.coords:
            if not (0 <= r <= dims[0] - w and 0 <= c <= dims[1] - w):
                raise DimensionMismatch(f"patch at {(r, c)} outside {dims[0]}x{dims[1]} image")
    sums, counts = accumulate(groups, dims)
    return finish(sums, counts, None if fallback is None else fallback.channels)
