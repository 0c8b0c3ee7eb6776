import numpy as np
import pytest

from quatdenoise.config import DenoiseConfig
from quatdenoise.denoise.image import ColorImageQ
from quatdenoise.denoise.patches import (
    PatchGroup,
    aggregate,
    extract_group,
    reference_grid,
    search_range,
)
from quatdenoise.errors import DimensionMismatch, WindowTooSmall
from quatdenoise.quaternion.matrix import QMatrix


def small_config(**kw) -> DenoiseConfig:
    base = dict(sigma=25.0, patch=4, group=5, rank=2, rounds=1, window=10, stride=2)
    base.update(kw)
    return DenoiseConfig(**base)


def random_image(rng, height=20, width=20) -> ColorImageQ:
    return ColorImageQ.from_channels(rng.uniform(0.0, 255.0, size=(3, height, width)))


def test_reference_grid_includes_last_row_and_column():
    grid = reference_grid(21, 20, 8, 4)
    rows = sorted({r for r, _ in grid})
    cols = sorted({c for _, c in grid})
    assert rows == [0, 4, 8, 12, 13]
    assert cols == [0, 4, 8, 12]
    assert grid[0] == (0, 0)


def test_search_range_is_clipped():
    assert search_range(0, 64, 8, 30) == (0, 11)
    assert search_range(20, 64, 8, 30) == (9, 31)
    assert search_range(56, 64, 8, 30) == (45, 56)


def test_group_layout_is_column_major(rng):
    image = random_image(rng)
    group = extract_group(image, (6, 7), small_config())
    assert group.data.shape == (16, 5)
    assert group.coords[0] == (6, 7)
    assert group.data.is_pure()
    for row in range(4):
        for col in range(4):
            np.testing.assert_array_equal(group.data.planes[1:, col * 4 + row, 0], image.channels[:, 6 + row, 7 + col])


def test_exact_duplicate_is_nearest(rng):
    channels = rng.uniform(0.0, 255.0, size=(3, 20, 20))
    channels[:, 2:6, 13:17] = channels[:, 8:12, 8:12]
    group = extract_group(ColorImageQ.from_channels(channels), (8, 8), small_config(window=16))
    assert group.coords[:2] == [(8, 8), (2, 13)]


def test_ties_follow_row_major_order():
    flat = ColorImageQ.from_channels(np.full((3, 20, 20), 100.0))
    group = extract_group(flat, (8, 8), small_config())
    assert group.coords == [(8, 8), (5, 5), (5, 6), (5, 7), (5, 8)]


def test_window_too_small(rng):
    with pytest.raises(WindowTooSmall) as excinfo:
        extract_group(random_image(rng), (8, 8), small_config(window=5, group=10))
    assert excinfo.value.candidates == 4


def test_reference_out_of_bounds(rng):
    with pytest.raises(DimensionMismatch):
        extract_group(random_image(rng), (17, 0), small_config())


def test_unchanged_groups_reproduce_image(rng):
    image = random_image(rng)
    cfg = small_config()
    groups = [extract_group(image, ref, cfg) for ref in reference_grid(20, 20, 4, 2)]
    out = aggregate(groups, image.shape, fallback=image)
    np.testing.assert_allclose(out.channels, image.channels, rtol=0, atol=1e-12)


def test_aggregation_is_convex_and_drops_real_part(rng):
    planes = rng.standard_normal((4, 9, 3)) * 50.0
    group = PatchGroup(data=QMatrix(planes), coords=[(0, 0), (1, 2), (4, 4)])
    out = aggregate([group], (7, 8))
    assert out.pixels.is_pure()
    covered = np.zeros((7, 8), dtype=bool)
    for r, c in group.coords:
        covered[r : r + 3, c : c + 3] = True
    for ch in range(3):
        lo, hi = planes[ch + 1].min(), planes[ch + 1].max()
        values = out.channels[ch][covered]
        assert np.all(values >= lo - 1e-12) and np.all(values <= hi + 1e-12)
    assert np.all(out.channels[:, ~covered] == 0.0)


def test_overlaps_are_averaged():
    ones = np.zeros((4, 4, 1))
    ones[1:] = 1.0
    threes = np.zeros((4, 4, 1))
    threes[1:] = 3.0
    groups = [
        PatchGroup(QMatrix(ones), [(0, 0)]),
        PatchGroup(QMatrix(threes), [(0, 1)]),
    ]
    out = aggregate(groups, (2, 3))
    np.testing.assert_array_equal(out.channels[0], [[1.0, 2.0, 3.0], [1.0, 2.0, 3.0]])


def two_texture_image() -> ColorImageQ:
    """Flat grey in columns 0-7, vertical 0/255 stripes from column 8 on."""
    channels = np.full((3, 24, 24), 120.0)
    channels[:, :, 8::2] = 0.0
    channels[:, :, 9::2] = 255.0
    return ColorImageQ.from_channels(channels)


def test_group_stays_in_flat_region():
    cfg = small_config(group=16, window=12)
    group = extract_group(two_texture_image(), (8, 2), cfg)
    assert group.coords[0] == (8, 2)
    assert len(set(group.coords)) == 16
    assert all(c + 4 <= 8 for _, c in group.coords)


def test_group_stays_in_striped_region_with_matching_phase():
    cfg = small_config(group=16, window=12)
    group = extract_group(two_texture_image(), (8, 14), cfg)
    assert group.coords[0] == (8, 14)
    assert all(c >= 8 and c % 2 == 0 for _, c in group.coords)
    planes = group.data.planes
    np.testing.assert_array_equal(planes, np.repeat(planes[:, :, :1], 16, axis=2))


def brute_force_average(groups, height, width):
    sums = np.zeros((3, height, width))
    counts = np.zeros((height, width))
    for group in groups:
        w = group.patch_size
        for j, (r, c) in enumerate(group.coords):
            for col in range(w):
                for row in range(w):
                    sums[:, r + row, c + col] += group.data.planes[1:, col * w + row, j]
                    counts[r + row, c + col] += 1
    out = np.zeros_like(sums)
    covered = counts > 0
    out[:, covered] = sums[:, covered] / counts[covered]
    return out


def test_aggregate_matches_per_pixel_average(rng):
    groups = []
    for _ in range(6):
        n = int(rng.integers(1, 6))
        coords = [(int(rng.integers(0, 17)), int(rng.integers(0, 13))) for _ in range(n)]
        groups.append(PatchGroup(QMatrix(rng.standard_normal((4, 16, n)) * 40.0), coords))
    out = aggregate(groups, (20, 16))
    np.testing.assert_allclose(out.channels, brute_force_average(groups, 20, 16), rtol=0, atol=1e-12)
