"""Command-line front end for the dipole-field pipeline.

One binary with subcommands, each a tap on the same pipeline: magnitude
maps, raw field exports, stroke overlays, sign-domain segmentation, the
gradient baseline, and an agreement statistic between the two fields.
Exit codes: 0 success, 1 usage error, 2 I/O or image-format error.
Diagnostics go to standard error; machine output goes to files or
standard output.  Outputs are byte-identical across repeated runs.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

import numpy as np

from .analysis import angular_agreement, gradient_field, perpendicular_field
from .core import DimensionError, GrayImage, Window, dipole_field_fast, magnitude_field
from .imgio import PnmParseError, export_field, read_pgm, write_pgm, write_ppm
from .render import OverlayConfig, cell_dipoles, render_overlay, tone_map
from .segment import extract_domains

__all__ = ["run", "main"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # raise instead of exiting so run() controls the exit code
    def error(self, message: str):
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return value


def _tau(text: str) -> float | None:
    """Threshold flag value: a nonnegative real, or 'auto' (returned as None)."""
    if text == "auto":
        return None
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0 or 'auto'")
    return value


def _load(path: str) -> GrayImage:
    with open(path, "rb") as fh:
        return read_pgm(fh.read())


def _write(path: str, data: bytes) -> None:
    with open(path, "wb") as fh:
        fh.write(data)


def _auto_tau(field_max: float) -> float:
    return 0.05 * field_max


def _cmd_magnitude(args: argparse.Namespace) -> int:
    img = _load(args.input)
    mag = magnitude_field(dipole_field_fast(img, args.window))
    _write(args.output, write_pgm(tone_map(mag, args.alpha)))
    return 0


def _cmd_field(args: argparse.Namespace) -> int:
    img = _load(args.input)
    field = dipole_field_fast(img, args.window)
    export = export_field(field, args.format, {"window": str(args.window)})
    _write(args.output, export.text.encode("utf-8"))
    return 0


def _cmd_overlay(args: argparse.Namespace) -> int:
    img = _load(args.input)
    cells = cell_dipoles(img, args.cell_size)
    cfg = OverlayConfig(cell_size=args.cell_size, magnitude_threshold=args.tau)
    _write(args.output, write_ppm(render_overlay(img, cells, cfg)))
    return 0


def _cmd_segment(args: argparse.Namespace) -> int:
    img = _load(args.input)
    mag = magnitude_field(dipole_field_fast(img, args.window))
    tau = args.tau if args.tau is not None else _auto_tau(float(np.max(mag.values)))
    domains = extract_domains(img, args.window, tau, args.connectivity, args.min_pixels)
    doc: dict[str, Any] = {
        "metadata": {
            "window": str(args.window),
            "tau": tau,
            "connectivity": args.connectivity,
            "min_pixels": args.min_pixels,
        },
        "domain_count": len(domains),
        "domains": [
            {"label": d.label, "bbox": list(d.bbox), "pixel_count": d.pixel_count}
            for d in domains
        ],
    }
    if args.export_fields:
        for entry, d in zip(doc["domains"], domains):
            entry["dipoles"] = json.loads(export_field(d.dipoles).text)
            entry["perpendiculars"] = json.loads(export_field(d.perpendiculars).text)
    _write(args.output, (json.dumps(doc) + "\n").encode("utf-8"))
    return 0


def _cmd_perp(args: argparse.Namespace) -> int:
    img = _load(args.input)
    field = perpendicular_field(dipole_field_fast(img, args.window))
    export = export_field(field, args.format, {"window": str(args.window)})
    _write(args.output, export.text.encode("utf-8"))
    return 0


def _cmd_gradient(args: argparse.Namespace) -> int:
    img = _load(args.input)
    export = export_field(gradient_field(img), args.format, {})
    _write(args.output, export.text.encode("utf-8"))
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    img = _load(args.input)
    dip = dipole_field_fast(img, args.window)
    mag = magnitude_field(dip)
    gate = args.tau if args.tau is not None else _auto_tau(float(np.max(mag.values)))
    stats = angular_agreement(dip, gradient_field(img), gate)
    doc = {
        "metadata": {"window": str(args.window), "tau": gate},
        "median_angle_deg": stats.median_angle_deg,
        "mean_angle_deg": stats.mean_angle_deg,
        "sample_count": stats.sample_count,
    }
    print(json.dumps(doc))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="dipolefield",
        description="Local dipole-moment fields over grayscale images.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def command(name: str, func, help_text: str, output: str | None = "output file"):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("input", help="input PGM image (P5 or P2)")
        if output:
            p.add_argument("output", help=output)
        p.set_defaults(func=func)
        return p

    def window_flag(p):
        p.add_argument(
            "--window",
            type=Window.parse,
            default=Window.block2x2(),
            metavar="W",
            help="dipole window: '2x2' or 'r<di>x<dj>' (default 2x2)",
        )

    def format_flag(p):
        p.add_argument(
            "--format",
            choices=("json", "csv"),
            default="json",
            help="export format (default json)",
        )

    def tau_flag(p, what: str):
        p.add_argument(
            "--tau",
            type=_tau,
            default=None,
            metavar="T",
            help=f"{what}; a real >= 0 or 'auto' = 5%% of max (default auto)",
        )

    p = command("magnitude", _cmd_magnitude, "write the dipole magnitude as a tone-mapped PGM", "output PGM")
    window_flag(p)
    p.add_argument("--alpha", type=_positive_float, default=0.5, help="tone-map exponent (default 0.5)")

    p = command("field", _cmd_field, "export the dipole vector field")
    window_flag(p)
    format_flag(p)

    p = command("overlay", _cmd_overlay, "draw per-cell dipole strokes over the image", "output PPM")
    p.add_argument("--cell-size", type=_positive_int, default=20, help="square cell edge in pixels (default 20)")
    tau_flag(p, "minimum cell magnitude to draw")

    p = command("segment", _cmd_segment, "segment sign domains and write them as JSON")
    window_flag(p)
    tau_flag(p, "magnitude threshold")
    p.add_argument("--connectivity", type=int, choices=(4, 8), default=8, help="pixel adjacency (default 8)")
    p.add_argument("--min-pixels", type=_positive_int, default=4, help="drop smaller domains (default 4)")
    p.add_argument("--export-fields", action="store_true", help="embed per-domain dipole and perpendicular fields")

    p = command("perp", _cmd_perp, "export the perpendicular (quarter-turned) dipole field")
    window_flag(p)
    format_flag(p)

    p = command("gradient", _cmd_gradient, "export the brightness-gradient baseline field")
    format_flag(p)

    p = command("compare", _cmd_compare, "print dipole-vs-gradient angular agreement as JSON", output=None)
    window_flag(p)
    tau_flag(p, "magnitude gate for compared pixels")

    return parser


def run(argv: list[str] | None = None) -> int:
    """Parse argv and execute one subcommand; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (OSError, PnmParseError, DimensionError) as exc:
        print(f"dipolefield: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    raise SystemExit(run(sys.argv[1:]))
