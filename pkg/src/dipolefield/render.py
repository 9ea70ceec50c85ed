"""Tone-mapped magnitude images and cell-grid direction overlays."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .core import Dipole, DimensionError, GrayImage, ScalarField, patch_dipole

__all__ = [
    "RgbImage",
    "OverlayConfig",
    "tone_map",
    "to_rgb",
    "cell_dipoles",
    "render_overlay",
]

log = logging.getLogger(__name__)

Cell = tuple[tuple[float, float], Dipole]


@dataclass(frozen=True)
class RgbImage:
    """24-bit color image; ``pixels`` has shape (height, width, 3)."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        px = np.asarray(self.pixels)
        if px.ndim != 3 or px.shape[2] != 3 or px.size == 0:
            raise ValueError(f"pixels must have shape (h, w, 3), got {px.shape}")
        if px.dtype != np.uint8:
            if not np.issubdtype(px.dtype, np.integer) or px.min() < 0 or px.max() > 255:
                raise ValueError("pixel values must be integers in [0, 255]")
        arr = np.array(px, dtype=np.uint8)
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class OverlayConfig:
    """Settings for the red-line direction overlay.

    ``magnitude_threshold`` of None means automatic: 5% of the largest
    cell magnitude.  ``line_length_mode`` is ``fixed_fraction`` (all lines
    0.8 * cell_size long) or ``magnitude_scaled`` (scaled by the cell's
    magnitude relative to the largest).
    """

    cell_size: int = 20
    magnitude_threshold: float | None = None
    line_color: tuple[int, int, int] = (255, 0, 0)
    line_length_mode: str = "fixed_fraction"

    def __post_init__(self) -> None:
        if self.cell_size < 2:
            raise ValueError("cell_size must be >= 2")
        if self.magnitude_threshold is not None and self.magnitude_threshold < 0:
            raise ValueError("magnitude_threshold must be >= 0")
        if len(self.line_color) != 3 or any(not 0 <= c <= 255 for c in self.line_color):
            raise ValueError("line_color must be three bytes")
        if self.line_length_mode not in ("fixed_fraction", "magnitude_scaled"):
            raise ValueError(f"unknown line_length_mode {self.line_length_mode!r}")


def tone_map(mag: ScalarField, alpha: float = 0.5) -> GrayImage:
    """Map a magnitude field to display bytes: 255 * (P / P_max)^alpha.

    Rounding is half-up, so the field maximum always maps to exactly 255.
    A uniformly zero field has no structure to show and maps to all black.
    """
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    p = mag.values
    if p.min() < 0:
        raise ValueError("magnitude field must be nonnegative")
    pmax = p.max()
    if pmax == 0.0:
        log.warning("tone_map: magnitude field is uniformly zero; output is all black")
        return GrayImage(np.zeros(p.shape, dtype=np.uint8))
    scaled = np.floor(255.0 * (p / pmax) ** alpha + 0.5)
    return GrayImage(np.clip(scaled, 0, 255).astype(np.uint8))


def to_rgb(img: GrayImage) -> RgbImage:
    """Replicate a grayscale image into identical R, G, B channels."""
    return RgbImage(np.repeat(img.pixels[:, :, None], 3, axis=2))


def cell_dipoles(img: GrayImage, cell_size: int = 20) -> list[Cell]:
    """One dipole per full cell_size x cell_size tile, with its center.

    Each tile is treated as a single window (charge against the tile mean).
    Partial tiles at the right/bottom borders are skipped.  Centers are
    (x, y) pixel coordinates, fractional for even cell sizes.
    """
    if cell_size < 2:
        raise ValueError("cell_size must be >= 2")
    if img.width < cell_size or img.height < cell_size:
        raise DimensionError(
            f"image {img.width}x{img.height} is smaller than one "
            f"{cell_size}x{cell_size} cell"
        )
    half = (cell_size - 1) / 2.0
    cells: list[Cell] = []
    for ty in range(img.height // cell_size):
        for tx in range(img.width // cell_size):
            tile = img.pixels[
                ty * cell_size : (ty + 1) * cell_size,
                tx * cell_size : (tx + 1) * cell_size,
            ]
            center = (tx * cell_size + half, ty * cell_size + half)
            cells.append((center, patch_dipole(tile)))
    return cells


def _segment_length(cfg: OverlayConfig, magnitude: float, max_magnitude: float) -> int:
    length = 0.8 * cfg.cell_size
    if cfg.line_length_mode == "magnitude_scaled" and max_magnitude > 0:
        length *= magnitude / max_magnitude
    # odd pixel count so the segment is symmetric about the center pixel
    n = int(math.floor(length + 0.5))
    return n + 1 if n % 2 == 0 else n


def render_overlay(img: GrayImage, cells: list[Cell], cfg: OverlayConfig) -> RgbImage:
    """Draw an undirected direction stroke per cell onto the image.

    The grayscale input is replicated to RGB; each cell whose dipole
    magnitude reaches the threshold gets a straight segment through the
    cell center along the dipole direction, rasterized on the pixel grid
    and clipped to its own cell.  Strokes for d and -d are the same pixel
    set; zero dipoles have no direction and are skipped.
    """
    rgb = np.repeat(img.pixels[:, :, None], 3, axis=2)
    color = np.array(cfg.line_color, dtype=np.uint8)
    magnitudes = [d.magnitude for _, d in cells]
    max_mag = max(magnitudes, default=0.0)
    threshold = cfg.magnitude_threshold
    if threshold is None:
        threshold = 0.05 * max_mag

    for (cx, cy), d in cells:
        m = d.magnitude
        if m < threshold or m == 0.0:
            continue
        # cell bounds, recovered from the center and clipped to the image
        x0 = int(math.floor(cx - (cfg.cell_size - 1) / 2.0 + 0.5))
        y0 = int(math.floor(cy - (cfg.cell_size - 1) / 2.0 + 0.5))
        x1 = min(x0 + cfg.cell_size - 1, img.width - 1)
        y1 = min(y0 + cfg.cell_size - 1, img.height - 1)
        x0 = max(x0, 0)
        y0 = max(y0, 0)

        half_span = _segment_length(cfg, m, max_mag) // 2
        cxp = int(math.floor(cx + 0.5))
        cyp = int(math.floor(cy + 0.5))
        if abs(d.px) >= abs(d.py):
            slope = d.py / d.px  # invariant under d -> -d
            for t in range(-half_span, half_span + 1):
                x = cxp + t
                y = int(math.floor(cy + t * slope + 0.5))
                if x0 <= x <= x1 and y0 <= y <= y1:
                    rgb[y, x] = color
        else:
            slope = d.px / d.py
            for t in range(-half_span, half_span + 1):
                y = cyp + t
                x = int(math.floor(cx + t * slope + 0.5))
                if x0 <= x <= x1 and y0 <= y <= y1:
                    rgb[y, x] = color
    return RgbImage(rgb)
