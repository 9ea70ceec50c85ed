"""Local dipole-moment vector fields over grayscale images.

Treats each pixel's brightness deviation from its window mean as a
charge and computes the window's dipole moment, giving a vector per
pixel that points toward the locally brighter side.  The magnitude acts
as an edge strength, the direction as an edge normal, and the
quarter-turned field follows strokes instead of crossing them.
"""

from .analysis import AngularStats, angular_agreement, gradient_field, perpendicular_field
from .core import (
    DimensionError,
    Dipole,
    GrayImage,
    ScalarField,
    VectorField,
    Window,
    charge_map,
    dipole_field,
    dipole_field_fast,
    local_mean,
    magnitude_field,
    patch_dipole,
    whole_image_dipole,
)
from .imgio import (
    FieldExport,
    PnmParseError,
    export_field,
    import_field,
    read_pgm,
    read_ppm,
    write_pgm,
    write_ppm,
)
from .render import OverlayConfig, RgbImage, cell_dipoles, render_overlay, to_rgb, tone_map
from .segment import (
    BinaryMask,
    SignDomain,
    connected_components,
    extract_domains,
    threshold_mask,
)

__version__ = "0.1.0"

__all__ = [
    "AngularStats",
    "BinaryMask",
    "DimensionError",
    "Dipole",
    "FieldExport",
    "GrayImage",
    "OverlayConfig",
    "PnmParseError",
    "RgbImage",
    "ScalarField",
    "SignDomain",
    "VectorField",
    "Window",
    "angular_agreement",
    "cell_dipoles",
    "charge_map",
    "connected_components",
    "dipole_field",
    "dipole_field_fast",
    "export_field",
    "extract_domains",
    "gradient_field",
    "import_field",
    "local_mean",
    "magnitude_field",
    "patch_dipole",
    "perpendicular_field",
    "read_pgm",
    "read_ppm",
    "render_overlay",
    "threshold_mask",
    "to_rgb",
    "tone_map",
    "whole_image_dipole",
    "write_pgm",
    "write_ppm",
]
