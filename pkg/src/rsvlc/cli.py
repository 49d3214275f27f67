"""Command line front end: simulate captures, decode them, sweep geometries.

Exit codes: 0 on success, 2 on input validation failure, 3 on decode
failure.  The decode command reports failures by exception class name so
scripts can branch on the cause.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import sweep_grid, sweep_to_csv
from .camera import render
from .decoder import DEFAULT_MIN_DEPTH, DecodeReport, decode_image
from .detector import Region, profile_to_csv
from .demod import signals_to_csv
from .errors import OddLedCount, SceneError, VlcError
from .pgm import read_pgm, write_pgm
from .scene import load_scene

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_DECODE = 3


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _indexed_path(path: str, index: int) -> Path:
    """out.csv -> out.csv, out_1.csv, out_2.csv for successive indices."""
    p = Path(path)
    if index == 0:
        return p
    return p.with_name(f"{p.stem}_{index}{p.suffix}")


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        spec = load_scene(args.scene)
    except OSError as exc:
        return _fail(f"cannot read scene file: {exc}", EXIT_INVALID)
    except (SceneError, OddLedCount) as exc:
        return _fail(str(exc), EXIT_INVALID)
    t0 = args.t0 if args.t0 is not None else spec.t0
    img = render(spec.leds, spec.ambient, spec.camera, t0=t0)
    try:
        write_pgm(args.output, img)
    except OSError as exc:
        return _fail(f"cannot write image: {exc}", EXIT_INVALID)
    print(f"samples per bit: {spec.samples_per_bit}")
    print(f"rows per frame: {spec.rows_per_frame}")
    print(f"capture capacity: {spec.capture_bits} bits")
    print(f"wrote {args.output} ({spec.camera.rows} x {spec.camera.cols})")
    return EXIT_OK


def _region_energy_min(report: DecodeReport, region: Region) -> float:
    for area in report.areas:
        profile = area.profile
        lo = region.col_start - profile.col_start
        hi = region.col_end - profile.col_start + 1
        if 0 <= lo and hi <= len(profile.values):
            return float(np.min(profile.values[lo:hi]))
    return float("nan")


def cmd_decode(args: argparse.Namespace) -> int:
    try:
        img = read_pgm(args.image)
    except OSError as exc:
        return _fail(f"cannot read image: {exc}", EXIT_INVALID)
    except ValueError as exc:
        return _fail(f"bad PGM file: {exc}", EXIT_INVALID)
    try:
        report = decode_image(img, args.samples_per_bit, min_depth=args.min_depth)
    except VlcError as exc:
        return _fail(f"{type(exc).__name__}: {exc}", EXIT_DECODE)

    print(f"message: {report.message.hex()}")
    print(f"mirrored: {'yes' if report.mirrored else 'no'}")
    regions = report.regions
    ordered_regions = regions[::-1] if report.mirrored else regions
    for k, (region, result) in enumerate(zip(ordered_regions, report.results)):
        e_min = _region_energy_min(report, region)
        print(
            f"region {k}: cols {region.col_start}..{region.col_end}, "
            f"parity {result.parity.name.title()}, payload 0x{result.payload:02x}, "
            f"clock period {result.clock.period:.4f}, energy min {e_min:.4f}"
        )
    if args.profile_csv:
        for k, area in enumerate(report.areas):
            profile_to_csv(area.profile, _indexed_path(args.profile_csv, k))
    if args.signals_csv:
        for k, result in enumerate(report.results):
            signals_to_csv(result, _indexed_path(args.signals_csv, k))
    return EXIT_OK


def _parse_grid(raw: str, name: str) -> list[float]:
    values = []
    for token in raw.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            values.append(float(token))
        except ValueError:
            raise ValueError(f"{name} needs comma-separated numbers, got {token!r}")
    return values


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        h_values = _parse_grid(args.heights, "--heights")
        d_values = _parse_grid(args.spacings, "--spacings")
    except ValueError as exc:
        return _fail(str(exc), EXIT_INVALID)
    if not h_values or not d_values:
        return _fail("sweep grid is empty", EXIT_INVALID)
    if min(h_values) <= 0 or min(d_values) < 0:
        return _fail("heights must be positive and spacings non-negative", EXIT_INVALID)

    points = sweep_grid(h_values, d_values, seed=args.seed, m=args.order)
    try:
        sweep_to_csv(points, args.output)
    except OSError as exc:
        return _fail(f"cannot write CSV: {exc}", EXIT_INVALID)
    counts = Counter(p.regime.value for p in points)
    print(f"wrote {args.output} ({len(points)} points)")
    for regime in sorted(counts):
        print(f"{regime}: {counts[regime]}")
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace) -> int:
    from .acceptance import run_all

    return EXIT_OK if run_all(verbose=True) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rsvlc",
        description=(
            "Spatially parallel visible light communication through a "
            "rolling shutter camera: simulate, decode, sweep."
        ),
    )
    parser.add_argument("--version", action="version", version=f"rsvlc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="render a scene file to a PGM capture")
    p_sim.add_argument("scene", help="scene file path")
    p_sim.add_argument("-o", "--output", required=True, help="output PGM path")
    p_sim.add_argument(
        "--t0",
        type=float,
        default=None,
        help="exposure start time (default: scene t0, else random from seed)",
    )
    p_sim.set_defaults(func=cmd_simulate)

    p_dec = sub.add_parser("decode", help="decode the message in a PGM capture")
    p_dec.add_argument("image", help="input PGM path")
    p_dec.add_argument(
        "-b",
        "--samples-per-bit",
        type=int,
        required=True,
        help="rows per modulation bit (T_d)",
    )
    p_dec.add_argument(
        "--min-depth",
        type=float,
        default=DEFAULT_MIN_DEPTH,
        help="energy threshold for splitting regions (default %(default)s)",
    )
    p_dec.add_argument(
        "--profile-csv", default=None, help="dump per-column energy profile CSV"
    )
    p_dec.add_argument(
        "--signals-csv", default=None, help="dump per-region 1-D signal CSVs"
    )
    p_dec.set_defaults(func=cmd_decode)

    p_swp = sub.add_parser("sweep", help="classify regimes over a geometry grid")
    p_swp.add_argument(
        "--heights", required=True, help="comma-separated LED heights h"
    )
    p_swp.add_argument(
        "--spacings", required=True, help="comma-separated LED spacings d_xy"
    )
    p_swp.add_argument("-o", "--output", required=True, help="output CSV path")
    p_swp.add_argument("--seed", type=int, default=0, help="payload seed")
    p_swp.add_argument(
        "--order", type=float, default=1.0, help="Lambertian order m of both LEDs"
    )
    p_swp.set_defaults(func=cmd_sweep)

    p_self = sub.add_parser("selftest", help="run the acceptance checks")
    p_self.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


def entry_point() -> None:
    raise SystemExit(main())
