"""Sign-domain segmentation: threshold the dipole magnitude, label regions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analysis import perpendicular_field
from .core import (
    GrayImage,
    ScalarField,
    VectorField,
    Window,
    dipole_field_fast,
    magnitude_field,
)

__all__ = [
    "BinaryMask",
    "SignDomain",
    "threshold_mask",
    "connected_components",
    "extract_domains",
]


@dataclass(frozen=True)
class BinaryMask:
    """Boolean map with shape (height, width)."""

    bits: np.ndarray

    def __post_init__(self) -> None:
        b = np.array(np.asarray(self.bits), dtype=bool)
        if b.ndim != 2 or b.size == 0:
            raise ValueError(f"bits must be a nonempty 2-D array, got shape {b.shape}")
        b.setflags(write=False)
        object.__setattr__(self, "bits", b)

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]


@dataclass(frozen=True)
class SignDomain:
    """One connected above-threshold region and its local fields.

    ``bbox`` is (min_x, min_y, max_x, max_y) in inclusive pixel
    coordinates; ``mask``, ``dipoles`` and ``perpendiculars`` are cropped
    to it.  The perpendiculars are the dipoles turned a quarter turn, so
    their strokes follow the sign instead of crossing it.
    """

    label: int
    bbox: tuple[int, int, int, int]
    mask: BinaryMask
    pixel_count: int
    dipoles: VectorField
    perpendiculars: VectorField


def threshold_mask(mag: ScalarField, tau: float) -> BinaryMask:
    """Bits set where the magnitude reaches tau (inclusive, so tau=0 keeps all)."""
    if tau < 0:
        raise ValueError("tau must be >= 0")
    return BinaryMask(mag.values >= tau)


def _find(parent: list[int], i: int) -> int:
    root = i
    while parent[root] != root:
        root = parent[root]
    while parent[i] != root:  # path compression
        parent[i], i = root, parent[i]
    return root


def _row_runs(row: np.ndarray) -> list[tuple[int, int]]:
    padded = np.zeros(row.size + 2, dtype=np.int8)
    padded[1:-1] = row
    d = np.diff(padded)
    starts = np.flatnonzero(d == 1)
    ends = np.flatnonzero(d == -1) - 1
    return list(zip(starts.tolist(), ends.tolist()))


def connected_components(mask: BinaryMask, connectivity: int = 8) -> tuple[ScalarField, int]:
    """Label connected regions of set bits; clear bits are labeled 0.

    Labels are dense 1..n, assigned in raster-scan order of each
    component's first pixel, so the output is reproducible run to run.
    Uses union-find over horizontal runs: runs in adjacent rows are merged
    when their column spans touch under the chosen connectivity (4 or 8).
    """
    if connectivity not in (4, 8):
        raise ValueError("connectivity must be 4 or 8")
    bits = mask.bits
    h, w = bits.shape

    runs: list[tuple[int, int, int]] = []  # (row, start_col, end_col), raster order
    row_spans: list[list[tuple[int, int, int]]] = []  # per row: (start, end, run_id)
    for i in range(h):
        spans = []
        for s, e in _row_runs(bits[i]):
            spans.append((s, e, len(runs)))
            runs.append((i, s, e))
        row_spans.append(spans)

    parent = list(range(len(runs)))
    reach = 1 if connectivity == 8 else 0
    for i in range(1, h):
        above, here = row_spans[i - 1], row_spans[i]
        if not above or not here:
            continue
        a = 0
        for s, e, rid in here:
            while a < len(above) and above[a][1] < s - reach:
                a += 1
            k = a
            while k < len(above) and above[k][0] <= e + reach:
                ra, rb = _find(parent, rid), _find(parent, above[k][2])
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
                k += 1

    # run ids are in raster order, so the smallest root id in a component
    # belongs to its first-encountered run
    label_of_root: dict[int, int] = {}
    labels = np.zeros((h, w), dtype=np.int64)
    for rid, (i, s, e) in enumerate(runs):
        root = _find(parent, rid)
        lab = label_of_root.get(root)
        if lab is None:
            lab = len(label_of_root) + 1
            label_of_root[root] = lab
        labels[i, s : e + 1] = lab
    return ScalarField(labels.astype(np.float64)), len(label_of_root)


def extract_domains(
    img: GrayImage,
    win: Window,
    tau: float,
    connectivity: int = 8,
    min_pixels: int = 4,
) -> list[SignDomain]:
    """Full segmentation pipeline, returning one domain per kept component.

    Dipole field -> magnitude -> threshold at tau -> connected components;
    components smaller than min_pixels are dropped (their labels are not
    reused).  Each domain carries its bounding box, cropped mask, and the
    dipole and perpendicular fields over the box.
    """
    if min_pixels < 1:
        raise ValueError("min_pixels must be >= 1")
    field = dipole_field_fast(img, win)
    mask = threshold_mask(magnitude_field(field), tau)
    labeled, count = connected_components(mask, connectivity)
    lab = labeled.values.astype(np.int64)

    ys, xs = np.nonzero(lab)
    if ys.size == 0:
        return []
    ls = lab[ys, xs]
    sizes = np.bincount(ls, minlength=count + 1)
    min_x = np.full(count + 1, img.width, dtype=np.int64)
    max_x = np.full(count + 1, -1, dtype=np.int64)
    min_y = np.full(count + 1, img.height, dtype=np.int64)
    max_y = np.full(count + 1, -1, dtype=np.int64)
    np.minimum.at(min_x, ls, xs)
    np.maximum.at(max_x, ls, xs)
    np.minimum.at(min_y, ls, ys)
    np.maximum.at(max_y, ls, ys)

    domains: list[SignDomain] = []
    for k in range(1, count + 1):
        if sizes[k] < min_pixels:
            continue
        x0, x1 = int(min_x[k]), int(max_x[k])
        y0, y1 = int(min_y[k]), int(max_y[k])
        box = (slice(y0, y1 + 1), slice(x0, x1 + 1))
        dipoles = VectorField(field.x[box], field.y[box])
        domains.append(
            SignDomain(
                label=k,
                bbox=(x0, y0, x1, y1),
                mask=BinaryMask(lab[box] == k),
                pixel_count=int(sizes[k]),
                dipoles=dipoles,
                perpendiculars=perpendicular_field(dipoles),
            )
        )
    return domains
