import logging

import numpy as np
import pytest

from dipolefield import (
    DimensionError,
    Dipole,
    GrayImage,
    OverlayConfig,
    RgbImage,
    ScalarField,
    cell_dipoles,
    render_overlay,
    to_rgb,
    tone_map,
)
from reference import brute_patch_dipole


def field(rows):
    return ScalarField(np.array(rows, dtype=np.float64))


# ---------------------------------------------------------------- tone_map


def test_tone_map_examples():
    out = tone_map(field([[0.0, 25.0, 100.0]]), 0.5)
    # P=0 -> 0, P=Pmax/4 at alpha 1/2 -> round(255*0.5)=128, P=Pmax -> 255
    assert np.array_equal(out.pixels, np.array([[0, 128, 255]], dtype=np.uint8))


def test_tone_map_default_alpha_is_half():
    mag = field([[0.0, 1.0, 4.0]])
    assert np.array_equal(tone_map(mag).pixels, tone_map(mag, 0.5).pixels)


def test_tone_map_max_is_255(rng):
    mag = ScalarField(rng.random((6, 6)) * 17.0)
    for alpha in (0.25, 0.5, 1.0, 2.0):
        out = tone_map(mag, alpha)
        assert out.pixels.max() == 255
        assert out.pixels[np.unravel_index(np.argmax(mag.values), mag.values.shape)] == 255


def test_tone_map_monotone(rng):
    mag = ScalarField(rng.random((8, 8)) * 100.0)
    out = tone_map(mag, 0.5)
    order = np.argsort(mag.values.ravel(), kind="stable")
    mapped = out.pixels.ravel()[order]
    assert (np.diff(mapped.astype(np.int32)) >= 0).all()


def test_tone_map_scale_invariant(rng):
    vals = rng.random((5, 5)) * 3.0
    a = tone_map(ScalarField(vals), 0.5)
    b = tone_map(ScalarField(vals * 12.5), 0.5)
    assert np.array_equal(a.pixels, b.pixels)


def test_tone_map_zero_field_warns(caplog):
    with caplog.at_level(logging.WARNING):
        out = tone_map(field([[0.0, 0.0]]), 0.5)
    assert not out.pixels.any()
    assert any("zero" in rec.message for rec in caplog.records)


def test_tone_map_input_checks():
    with pytest.raises(ValueError):
        tone_map(field([[1.0]]), 0.0)
    with pytest.raises(ValueError):
        tone_map(field([[-1.0]]), 0.5)


# ---------------------------------------------------------------- rgb


def test_to_rgb_replicates_channels(rng):
    img = GrayImage(rng.integers(0, 256, size=(4, 5), dtype=np.uint8))
    rgb = to_rgb(img)
    for c in range(3):
        assert np.array_equal(rgb.pixels[:, :, c], img.pixels)


def test_rgb_image_validation():
    with pytest.raises(ValueError):
        RgbImage(np.zeros((3, 3), dtype=np.uint8))
    with pytest.raises(ValueError):
        RgbImage(np.full((2, 2, 3), 300))


# ---------------------------------------------------------------- cell_dipoles


def test_cell_dipoles_uniform():
    img = GrayImage(np.full((40, 60), 80, dtype=np.uint8))
    cells = cell_dipoles(img, 20)
    assert len(cells) == 6
    assert all(d.px == 0.0 and d.py == 0.0 for _, d in cells)


def test_cell_dipoles_half_bright_tile():
    tile = np.zeros((20, 20), dtype=np.uint8)
    tile[:, 10:] = 255
    (center, d), = cell_dipoles(GrayImage(tile), 20)
    assert center == (9.5, 9.5)
    assert d.px > 0 and d.py == 0.0
    bx, by = brute_patch_dipole(tile)
    assert abs(d.px - bx) <= 1e-9 and abs(d.py - by) <= 1e-9


def test_cell_dipoles_tiling_counts():
    img = GrayImage(np.zeros((20, 40), dtype=np.uint8))
    assert len(cell_dipoles(img, 20)) == 2
    ragged = GrayImage(np.zeros((25, 45), dtype=np.uint8))
    assert len(cell_dipoles(ragged, 20)) == 2  # partial tiles skipped


def test_cell_dipoles_centers_are_cell_centers():
    img = GrayImage(np.zeros((8, 12), dtype=np.uint8))
    centers = [c for c, _ in cell_dipoles(img, 4)]
    assert centers == [(1.5, 1.5), (5.5, 1.5), (9.5, 1.5), (1.5, 5.5), (5.5, 5.5), (9.5, 5.5)]


def test_cell_dipoles_errors():
    with pytest.raises(DimensionError):
        cell_dipoles(GrayImage(np.zeros((10, 10), dtype=np.uint8)), 20)
    with pytest.raises(ValueError):
        cell_dipoles(GrayImage(np.zeros((10, 10), dtype=np.uint8)), 1)


# ---------------------------------------------------------------- overlay


def overlay_cells(img, cell_size=20):
    return cell_dipoles(img, cell_size)


def test_overlay_nothing_drawn_below_threshold(rng):
    img = GrayImage(rng.integers(0, 256, size=(40, 40), dtype=np.uint8))
    cells = overlay_cells(img)
    cfg = OverlayConfig(magnitude_threshold=1e9)
    out = render_overlay(img, cells, cfg)
    assert np.array_equal(out.pixels, to_rgb(img).pixels)


def test_overlay_horizontal_line_pixel_count():
    img = GrayImage(np.zeros((20, 20), dtype=np.uint8))
    cells = [((9.5, 9.5), Dipole(1.0, 0.0))]
    out = render_overlay(img, cells, OverlayConfig(magnitude_threshold=0.5))
    red = (out.pixels == np.array([255, 0, 0], dtype=np.uint8)).all(axis=2)
    assert red.sum() == 17  # 0.8 * 20 rounded to an odd length
    ys, xs = np.nonzero(red)
    assert set(ys) == {10}
    assert xs.min() == 2 and xs.max() == 18


def test_overlay_zero_dipole_skipped():
    img = GrayImage(np.zeros((20, 20), dtype=np.uint8))
    out = render_overlay(img, [((9.5, 9.5), Dipole(0.0, 0.0))], OverlayConfig(magnitude_threshold=0.0))
    assert np.array_equal(out.pixels, to_rgb(img).pixels)


def test_overlay_changes_only_line_color_pixels(rng):
    img = GrayImage(rng.integers(0, 200, size=(40, 40), dtype=np.uint8))
    cells = [((9.5, 9.5), Dipole(2.0, 1.0)), ((29.5, 29.5), Dipole(-1.0, 3.0))]
    cfg = OverlayConfig(magnitude_threshold=0.0)
    out = render_overlay(img, cells, cfg)
    base = to_rgb(img).pixels
    changed = (out.pixels != base).any(axis=2)
    assert changed.any()
    assert (out.pixels[changed] == np.array([255, 0, 0], dtype=np.uint8)).all()


def test_overlay_direction_sign_irrelevant(rng):
    img = GrayImage(np.zeros((20, 20), dtype=np.uint8))
    for _ in range(20):
        px, py = rng.normal(size=2)
        if px == 0 and py == 0:
            continue
        a = render_overlay(img, [((9.5, 9.5), Dipole(px, py))], OverlayConfig(magnitude_threshold=0.0))
        b = render_overlay(img, [((9.5, 9.5), Dipole(-px, -py))], OverlayConfig(magnitude_threshold=0.0))
        assert np.array_equal(a.pixels, b.pixels)


def test_overlay_lines_stay_inside_cells():
    img = GrayImage(np.zeros((40, 40), dtype=np.uint8))
    cells = cell_dipoles(img, 20)
    cells = [(c, Dipole(1.0, 1.0)) for c, _ in cells]
    out = render_overlay(img, cells, OverlayConfig(magnitude_threshold=0.0))
    red = (out.pixels[:, :, 0] == 255) & (out.pixels[:, :, 1] == 0)
    for ty in range(2):
        for tx in range(2):
            tile = red[ty * 20 : (ty + 1) * 20, tx * 20 : (tx + 1) * 20]
            assert tile.any()
    # diagonal through each cell center never crosses a cell boundary pixel row/col count
    assert red.sum() == 4 * 17


def test_overlay_auto_threshold_hides_weak_cells(step_edge):
    # 20px cells on the 64-wide step: only the middle cell column straddles
    # the edge at column 32, every other cell is uniform with zero dipole
    cells = cell_dipoles(step_edge, 20)
    out = render_overlay(step_edge, cells, OverlayConfig(cell_size=20))
    red = (out.pixels == np.array([255, 0, 0], dtype=np.uint8)).all(axis=2)
    ys, xs = np.nonzero(red)
    assert len(xs) > 0
    assert xs.min() >= 20 and xs.max() < 40


def test_overlay_magnitude_scaled_lines_shorter():
    img = GrayImage(np.zeros((20, 40), dtype=np.uint8))
    cells = [((9.5, 9.5), Dipole(4.0, 0.0)), ((29.5, 9.5), Dipole(2.0, 0.0))]
    cfg = OverlayConfig(magnitude_threshold=0.0, line_length_mode="magnitude_scaled")
    out = render_overlay(img, cells, cfg)
    red = (out.pixels == np.array([255, 0, 0], dtype=np.uint8)).all(axis=2)
    left = red[:, :20].sum()
    right = red[:, 20:].sum()
    assert left == 17 and right == 9  # 16 and 8 rounded up to odd


def test_overlay_config_validation():
    with pytest.raises(ValueError):
        OverlayConfig(cell_size=1)
    with pytest.raises(ValueError):
        OverlayConfig(magnitude_threshold=-0.5)
    with pytest.raises(ValueError):
        OverlayConfig(line_color=(1, 2))
    with pytest.raises(ValueError):
        OverlayConfig(line_length_mode="dashed")
