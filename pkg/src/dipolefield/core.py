"""Local dipole-moment fields over grayscale brightness maps.

Each pixel's deviation from its neighborhood mean acts as a signed
"charge"; summing charge-weighted pixel offsets over the neighborhood
yields a vector that crosses edges from the dark side toward the bright
side.  The vector magnitude is an edge-strength measure and the direction
field behaves like the brightness gradient at edges.

All window sums are evaluated in exact int64 arithmetic with a single
final division, so the direct path and the summed-area-table path produce
bitwise-identical fields, independent of evaluation order.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DimensionError",
    "GrayImage",
    "ScalarField",
    "VectorField",
    "Window",
    "Dipole",
    "local_mean",
    "charge_map",
    "dipole_field",
    "dipole_field_fast",
    "magnitude_field",
    "whole_image_dipole",
    "patch_dipole",
]


class DimensionError(ValueError):
    """An image is too small for the requested window, or field shapes disagree."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class GrayImage:
    """8-bit brightness map; ``pixels`` is row-major with shape (height, width)."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.size == 0:
            raise ValueError(f"pixels must be a nonempty 2-D array, got shape {px.shape}")
        if px.dtype != np.uint8:
            if not np.issubdtype(px.dtype, np.integer):
                raise ValueError(f"pixel values must be integers, got dtype {px.dtype}")
            if px.min() < 0 or px.max() > 255:
                raise ValueError("pixel values must lie in [0, 255]")
        object.__setattr__(self, "pixels", _frozen(np.array(px, dtype=np.uint8)))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class ScalarField:
    """Real-valued map with shape (height, width); every value is finite."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.array(np.asarray(self.values), dtype=np.float64)
        if v.ndim != 2 or v.size == 0:
            raise ValueError(f"values must be a nonempty 2-D array, got shape {v.shape}")
        if not np.isfinite(v).all():
            raise ValueError("scalar field contains NaN or infinite values")
        object.__setattr__(self, "values", _frozen(v))

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class VectorField:
    """Two-component vector per pixel: ``x`` points right (columns), ``y`` down (rows)."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self) -> None:
        x = np.array(np.asarray(self.x), dtype=np.float64)
        y = np.array(np.asarray(self.y), dtype=np.float64)
        if x.ndim != 2 or x.size == 0:
            raise ValueError(f"components must be nonempty 2-D arrays, got shape {x.shape}")
        if x.shape != y.shape:
            raise ValueError(f"component shapes differ: {x.shape} vs {y.shape}")
        if not (np.isfinite(x).all() and np.isfinite(y).all()):
            raise ValueError("vector field contains NaN or infinite values")
        object.__setattr__(self, "x", _frozen(x))
        object.__setattr__(self, "y", _frozen(y))

    @property
    def width(self) -> int:
        return self.x.shape[1]

    @property
    def height(self) -> int:
        return self.x.shape[0]


_WINDOW_RE = re.compile(r"^r(\d+)x(\d+)$")


@dataclass(frozen=True)
class Window:
    """Neighborhood over which means, charges and dipoles are computed.

    Two kinds exist: ``block2x2``, the smallest possible neighborhood (the
    2x2 block anchored at each pixel), and ``radius``, the symmetric
    (2*delta_i+1) x (2*delta_j+1) window centered at each pixel and
    clipped at the image borders.
    """

    kind: str
    delta_i: int = 0
    delta_j: int = 0

    def __post_init__(self) -> None:
        if self.kind == "block2x2":
            if self.delta_i or self.delta_j:
                raise ValueError("block2x2 windows take no half-extents")
        elif self.kind == "radius":
            if self.delta_i < 1 or self.delta_j < 1:
                raise ValueError("radius half-extents must be >= 1")
        else:
            raise ValueError(f"unknown window kind {self.kind!r}")

    @classmethod
    def block2x2(cls) -> "Window":
        return cls("block2x2")

    @classmethod
    def radius(cls, delta_i: int, delta_j: int) -> "Window":
        return cls("radius", delta_i, delta_j)

    @classmethod
    def parse(cls, text: str) -> "Window":
        """Parse ``"2x2"`` or ``"r<delta_i>x<delta_j>"`` (e.g. ``"r3x3"``)."""
        if text == "2x2":
            return cls.block2x2()
        m = _WINDOW_RE.match(text)
        if m:
            return cls.radius(int(m.group(1)), int(m.group(2)))
        raise ValueError(f"cannot parse window {text!r}: expected '2x2' or 'r<di>x<dj>'")

    def __str__(self) -> str:
        if self.kind == "block2x2":
            return "2x2"
        return f"r{self.delta_i}x{self.delta_j}"


@dataclass(frozen=True)
class Dipole:
    """One dipole vector, in brightness times pixel-length units."""

    px: float
    py: float

    @property
    def magnitude(self) -> float:
        return math.hypot(self.px, self.py)


def _require_fits(img: GrayImage, win: Window) -> None:
    if win.kind == "block2x2" and (img.width < 2 or img.height < 2):
        raise DimensionError(
            f"2x2 window needs an image of at least 2x2 pixels, got {img.width}x{img.height}"
        )


def _sat(a: np.ndarray) -> np.ndarray:
    # Zero-padded summed-area table: window sum over rows [r0, r1] and
    # columns [c0, c1] (inclusive) is S[r1+1,c1+1]-S[r0,c1+1]-S[r1+1,c0]+S[r0,c0].
    h, w = a.shape
    s = np.zeros((h + 1, w + 1), dtype=np.int64)
    s[1:, 1:] = a.cumsum(axis=0, dtype=np.int64).cumsum(axis=1)
    return s


def _box_sum(sat, r0, r1, c0, c1):
    # r0/r1 and c0/c1 are 1-D inclusive bounds per output row/column; the
    # row difference gathers whole rows (contiguous), keeping this fast
    rows = sat[r1 + 1] - sat[r0]
    return rows[:, c1 + 1] - rows[:, c0]


def _axis_bounds(n: int, delta: int):
    idx = np.arange(n, dtype=np.int64)
    return np.maximum(idx - delta, 0), np.minimum(idx + delta, n - 1)


def _shifted_slices(h: int, w: int, dk: int, dl: int):
    # Anchor region whose shifted counterpart stays inside the image, and
    # the matching source region.
    dest = (slice(max(0, -dk), h - max(0, dk)), slice(max(0, -dl), w - max(0, dl)))
    src = (slice(max(0, dk), h - max(0, -dk)), slice(max(0, dl), w - max(0, -dl)))
    return dest, src


def local_mean(img: GrayImage, win: Window) -> ScalarField:
    """Average brightness of each pixel's window.

    Radius windows are clipped at the borders and averaged over the pixels
    actually present.  For the 2x2 block the mean is taken over the full
    block anchored at each pixel; the last row and column, where no full
    block fits, repeat the nearest full block's mean.
    """
    _require_fits(img, win)
    b = img.pixels.astype(np.int64)
    if win.kind == "block2x2":
        s = b[:-1, :-1] + b[:-1, 1:] + b[1:, :-1] + b[1:, 1:]
        return ScalarField(np.pad(s / 4.0, ((0, 1), (0, 1)), mode="edge"))
    r0, r1 = _axis_bounds(img.height, win.delta_i)
    c0, c1 = _axis_bounds(img.width, win.delta_j)
    n = np.outer(r1 - r0 + 1, c1 - c0 + 1)
    return ScalarField(_box_sum(_sat(b), r0, r1, c0, c1) / n)


def charge_map(img: GrayImage, win: Window) -> ScalarField:
    """Signed charge of each pixel: brightness minus its local mean."""
    m = local_mean(img, win)
    return ScalarField(img.pixels.astype(np.float64) - m.values)


def dipole_field(img: GrayImage, win: Window) -> VectorField:
    """Local dipole vector at every pixel, by direct window sums.

    Within each window the charge q = b - M is taken against that window's
    own mean M, and the dipole is the charge-weighted average of pixel
    offsets (x along columns, y along rows):

        p_x = (1/N) sum q(k,l) * dl      p_y = (1/N) sum q(k,l) * dk

    Because the charges sum to zero the result does not depend on where the
    offsets are measured from.  Expanding M gives the integer numerator
    form actually evaluated,  p_x = (N*sum(b*dl) - sum(b)*sum(dl)) / N^2,
    which is exact until the single final division.

    Radius windows are clipped at the borders (N is the clipped count);
    windows reduced to a single pixel have zero dipole.  For the 2x2 block,
    anchors in the last row and column, where no full block fits, are set
    to the zero vector.
    """
    _require_fits(img, win)
    b = img.pixels.astype(np.int64)
    h, w = b.shape
    if win.kind == "block2x2":
        sb = b[:-1, :-1] + b[:-1, 1:] + b[1:, :-1] + b[1:, 1:]
        ax = b[:-1, 1:] + b[1:, 1:]  # sum of b*dl with dl in {0, 1}
        ay = b[1:, :-1] + b[1:, 1:]  # sum of b*dk with dk in {0, 1}
        # N = 4 and sum(dl) = sum(dk) = 2 for every full block
        px = np.zeros((h, w))
        py = np.zeros((h, w))
        px[:-1, :-1] = (4 * ax - 2 * sb) / 16.0
        py[:-1, :-1] = (4 * ay - 2 * sb) / 16.0
        return VectorField(px, py)

    n = np.zeros((h, w), dtype=np.int64)
    sb = np.zeros((h, w), dtype=np.int64)
    ax = np.zeros((h, w), dtype=np.int64)
    ay = np.zeros((h, w), dtype=np.int64)
    tx = np.zeros((h, w), dtype=np.int64)
    ty = np.zeros((h, w), dtype=np.int64)
    for dk in range(-win.delta_i, win.delta_i + 1):
        for dl in range(-win.delta_j, win.delta_j + 1):
            dest, src = _shifted_slices(h, w, dk, dl)
            n[dest] += 1
            sb[dest] += b[src]
            if dl:
                ax[dest] += dl * b[src]
                tx[dest] += dl
            if dk:
                ay[dest] += dk * b[src]
                ty[dest] += dk
    nn = n * n
    return VectorField((n * ax - sb * tx) / nn, (n * ay - sb * ty) / nn)


def dipole_field_fast(img: GrayImage, win: Window) -> VectorField:
    """Same field as :func:`dipole_field`, via summed-area tables.

    Three tables (of b, b*column, b*row) give every window's sums in O(1),
    so the cost per pixel is independent of the window size.  The
    absolute-coordinate sums are recombined to anchor-relative offsets in
    exact int64 arithmetic, making the output bitwise identical to the
    direct path.
    """
    _require_fits(img, win)
    b = img.pixels.astype(np.int64)
    h, w = b.shape
    rows = np.arange(h, dtype=np.int64)
    cols = np.arange(w, dtype=np.int64)
    sat_b = _sat(b)
    sat_bx = _sat(b * cols[None, :])
    sat_by = _sat(b * rows[:, None])

    if win.kind == "block2x2":
        r0, r1 = rows, np.minimum(rows + 1, h - 1)
        c0, c1 = cols, np.minimum(cols + 1, w - 1)
    else:
        r0, r1 = _axis_bounds(h, win.delta_i)
        c0, c1 = _axis_bounds(w, win.delta_j)
    nr = r1 - r0 + 1
    nc = c1 - c0 + 1
    n = nr[:, None] * nc[None, :]

    s_b = _box_sum(sat_b, r0, r1, c0, c1)
    a_x = _box_sum(sat_bx, r0, r1, c0, c1) - cols[None, :] * s_b
    a_y = _box_sum(sat_by, r0, r1, c0, c1) - rows[:, None] * s_b
    # sum of anchor-relative offsets over the window; (c0+c1)*nc is even
    t_x = nr[:, None] * (((c0 + c1) * nc) // 2 - cols * nc)[None, :]
    t_y = nc[None, :] * (((r0 + r1) * nr) // 2 - rows * nr)[:, None]

    nn = n * n
    px = (n * a_x - s_b * t_x) / nn
    py = (n * a_y - s_b * t_y) / nn
    if win.kind == "block2x2":
        px[-1, :] = px[:, -1] = 0.0
        py[-1, :] = py[:, -1] = 0.0
    return VectorField(px, py)


def magnitude_field(field: VectorField) -> ScalarField:
    """Euclidean norm of each vector; the edge-strength map."""
    return ScalarField(np.hypot(field.x, field.y))


def whole_image_dipole(img: GrayImage) -> Dipole:
    """First moment of raw brightness about the top-left origin.

    Unlike the local fields this uses brightness directly, not charge, so
    the value depends on the origin (fixed here at the top-left pixel,
    x along columns, y along rows).  Kept for completeness; the local
    fields are the useful quantities.
    """
    b = img.pixels.astype(np.int64)
    h, w = b.shape
    n = h * w
    px = int((b * np.arange(w, dtype=np.int64)).sum()) / n
    py = int((b.sum(axis=1) * np.arange(h, dtype=np.int64)).sum()) / n
    return Dipole(px, py)


def patch_dipole(patch: np.ndarray) -> Dipole:
    """Dipole of one rectangular brightness patch about its own mean.

    The patch is treated as a single window: charges are deviations from
    the patch mean and offsets are measured from the patch's left/top edge
    (any origin gives the same answer).
    """
    p = np.asarray(patch, dtype=np.int64)
    if p.ndim != 2 or p.size == 0:
        raise ValueError(f"patch must be a nonempty 2-D array, got shape {p.shape}")
    h, w = p.shape
    n = h * w
    s_b = int(p.sum())
    a_x = int((p * np.arange(w, dtype=np.int64)).sum())
    a_y = int((p.sum(axis=1) * np.arange(h, dtype=np.int64)).sum())
    t_x = h * (w * (w - 1) // 2)
    t_y = w * (h * (h - 1) // 2)
    return Dipole((n * a_x - s_b * t_x) / (n * n), (n * a_y - s_b * t_y) / (n * n))
