"""Gradient baseline, perpendicular field, and angular-agreement statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DimensionError, GrayImage, VectorField

__all__ = [
    "AngularStats",
    "gradient_field",
    "perpendicular_field",
    "angular_agreement",
]


@dataclass(frozen=True)
class AngularStats:
    """Unsigned per-pixel angles (degrees) between two fields, summarized."""

    median_angle_deg: float
    mean_angle_deg: float
    sample_count: int


def gradient_field(img: GrayImage) -> VectorField:
    """Brightness derivative vector at every pixel.

    Interior pixels use central differences, border pixels one-sided ones.
    An axis only 2 pixels long falls back to one-sided differences
    everywhere; an axis 1 pixel long has zero derivative.  The sign is
    +grad b (pointing toward brightness), matching the dipole field's
    orientation, not the potential-field convention of minus the gradient.
    """
    h, w = img.height, img.width
    if w < 3 and h < 3:
        raise DimensionError(
            f"gradient needs at least 3 pixels along one axis, got {w}x{h}"
        )
    b = img.pixels.astype(np.float64)
    gx = np.zeros((h, w))
    gy = np.zeros((h, w))
    if w >= 3:
        gx[:, 1:-1] = (b[:, 2:] - b[:, :-2]) / 2.0
        gx[:, 0] = b[:, 1] - b[:, 0]
        gx[:, -1] = b[:, -1] - b[:, -2]
    elif w == 2:
        gx[:, 0] = gx[:, 1] = b[:, 1] - b[:, 0]
    if h >= 3:
        gy[1:-1, :] = (b[2:, :] - b[:-2, :]) / 2.0
        gy[0, :] = b[1, :] - b[0, :]
        gy[-1, :] = b[-1, :] - b[-2, :]
    elif h == 2:
        gy[0, :] = gy[1, :] = b[1, :] - b[0, :]
    return VectorField(gx, gy)


def perpendicular_field(field: VectorField) -> VectorField:
    """Quarter turn of every vector: (x, y) -> (-y, x).  Magnitudes kept.

    The turned lines run along edges and strokes instead of across them.
    Only the line direction is meaningful downstream, so the sense of the
    turn is a fixed convention.
    """
    return VectorField(-field.y, field.x)


def angular_agreement(a: VectorField, b: VectorField, min_magnitude: float) -> AngularStats:
    """Median/mean unsigned angle between two fields over gated pixels.

    Only pixels where both fields reach ``min_magnitude`` are compared
    (zero vectors are always excluded: they have no direction).  Angles
    are in [0, 180] degrees via the clamped arccosine of the normalized
    dot product.  With no gated pixels the angles are reported as 0.
    """
    if (a.width, a.height) != (b.width, b.height):
        raise DimensionError(
            f"field dimensions differ: {a.width}x{a.height} vs {b.width}x{b.height}"
        )
    if min_magnitude < 0:
        raise ValueError("min_magnitude must be >= 0")
    ma = np.hypot(a.x, a.y)
    mb = np.hypot(b.x, b.y)
    keep = (ma >= min_magnitude) & (mb >= min_magnitude) & (ma > 0) & (mb > 0)
    count = int(np.count_nonzero(keep))
    if count == 0:
        return AngularStats(0.0, 0.0, 0)
    dot = a.x[keep] * b.x[keep] + a.y[keep] * b.y[keep]
    cosang = np.clip(dot / (ma[keep] * mb[keep]), -1.0, 1.0)
    angles = np.degrees(np.arccos(cosang))
    return AngularStats(float(np.median(angles)), float(np.mean(angles)), count)
