"""Command-line interface.

Exit codes: 0 success, 2 usage or input error, 3 topology violation under
``--require-topology``, 4 numerical or conditioning failure.  Set
``CSRBF_THREADS`` to a positive integer to evaluate grids and warps on that
many threads (0, the default, is sequential); outputs do not depend on it.

Large supports make the four-landmark closed forms lose precision: their
denominators shrink like ``1/c^3`` and are rejected below 1e-13, which caps
usable supports around ``c = 1e4``.
"""

import argparse
import os
from pathlib import Path
import sys

import numpy as np

from . import four_landmark, support
from .errors import (
    ConditioningError,
    CSRBFError,
    DomainError,
    InputError,
    SingularConfigurationError,
)
from .kernels import ALL_FAMILIES, Kernel, family_from_name
from .netpbm import read_image, write_image
from .registration import (
    FLOAT_FMT,
    LandmarkCorrespondence,
    Region,
    det_field,
    fit,
    format_det_field_csv,
    read_landmarks,
)
from .render import GridSpec, backward_transformation, deform_grid, warp_image

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_TOPOLOGY = 3
EXIT_NUMERICAL = 4

DEFAULT_SAFETY = 1.001
KERNEL_NAMES = ["wendland", "wu", "gneiting-7-2", "gneiting-5", "gneiting"]

ONE_LANDMARK = LandmarkCorrespondence([(0.5, 0.5)], [(0.6, 0.7)])
FOUR_LANDMARKS = LandmarkCorrespondence(
    [(0.5, 0.65), (0.35, 0.5), (0.65, 0.5), (0.5, 0.35)],
    [(0.5, 0.65), (0.35, 0.5), (0.65, 0.5), (0.5, 0.25)],
)
# figure id -> (landmarks, default support per kernel name)
FIGURES = {
    "4.1": (ONE_LANDMARK, {"wendland": 0.6, "wu": 0.58, "gneiting-7-2": 1.02, "gneiting-5": 1.26}),
    "4.2": (ONE_LANDMARK, dict.fromkeys(["wendland", "wu", "gneiting-7-2", "gneiting-5"], 0.15)),
    "5.2": (FOUR_LANDMARKS, dict.fromkeys(["wendland", "wu", "gneiting-7-2", "gneiting-5"], 100.0)),
    "5.3": (FOUR_LANDMARKS, dict.fromkeys(["wendland", "wu", "gneiting-7-2", "gneiting-5"], 0.15)),
}
FIGURE_IDS = [*FIGURES, "fig2-curve"]


class UsageError(CSRBFError):
    pass


def _fmt(v):
    return FLOAT_FMT.format(float(v))


def _threads():
    raw = os.environ.get("CSRBF_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"CSRBF_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise UsageError("CSRBF_THREADS must be non-negative")
    return n


def _support_arg(text):
    if text == "auto":
        return text
    try:
        c = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive number or 'auto', got {text!r}")
    if not (np.isfinite(c) and c > 0):
        raise argparse.ArgumentTypeError(f"support size must be positive, got {text!r}")
    return c


def _family(args, name=None):
    try:
        return family_from_name(name or args.kernel, args.l)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _resolve_c(c, family, landmarks, safety):
    if c != "auto":
        return c
    return safety * support.min_support(family, landmarks.max_shift())


# ------------------------------------------------------------------ commands


def cmd_min_support(args, out):
    if not (np.isfinite(args.delta) and args.delta > 0):
        raise UsageError(f"--delta must be positive, got {args.delta}")
    if args.all:
        bounds = support.table1()
    else:
        if args.family is None:
            raise UsageError("give --family or --all")
        bounds = [support.support_bound(_family(args, args.family))]
    out.write("family,r_star_over_c,slope_min,c_min\n")
    for b in bounds:
        out.write(
            f"{b.family.name},{_fmt(b.r_star_over_c)},{_fmt(b.slope_min)},"
            f"{_fmt(b.c_min_over_delta * args.delta)}\n"
        )
    return EXIT_OK


def cmd_fit_warp(args, out):
    family = _family(args)
    if not 0 <= args.fill <= 255:
        raise UsageError("--fill must lie in [0, 255]")
    if args.safety < 1:
        raise UsageError("--safety must be at least 1")
    landmarks = read_landmarks(args.landmarks)
    img = read_image(args.image)
    if img.width < 2 or img.height < 2:
        raise InputError("det field needs an image of at least 2 x 2 pixels")
    c = _resolve_c(args.c, family, landmarks, args.safety)
    kernel = Kernel(family, c)
    threads = _threads()

    warped = warp_image(kernel, landmarks, img, fill=args.fill, threads=threads)
    write_image(warped, args.out)

    nx, ny = args.det_resolution or (img.width, img.height)
    region = Region(0.0, img.width - 1.0, 0.0, img.height - 1.0)
    field = det_field(backward_transformation(kernel, landmarks), region, (nx, ny), threads)
    if args.det_csv:
        Path(args.det_csv).write_text(format_det_field_csv(field))
    out.write(
        f"kernel={family.name} c={_fmt(c)} min_det={_fmt(field.min_det)} "
        f"negative_fraction={_fmt(field.negative_fraction)}\n"
    )
    if args.require_topology and field.min_det <= 0:
        print(
            f"topology violation: min det J = {_fmt(field.min_det)} at "
            f"({_fmt(field.argmin[0])}, {_fmt(field.argmin[1])})",
            file=sys.stderr,
        )
        return EXIT_TOPOLOGY
    return EXIT_OK


def _figure_families(args):
    if args.kernel is None:
        return list(ALL_FAMILIES)
    return [_family(args, name) for name in args.kernel]


def cmd_figures(args, out):
    families = _figure_families(args)
    if args.id == "fig2-curve":
        c = 100.0 if args.c is None else args.c
        if c == "auto":
            raise UsageError("--c auto is not meaningful for fig2-curve")
        ys = four_landmark.figure2_y_samples(args.y_samples)
        rows = four_landmark.figure2_table(families, c, args.delta, ys)
        text = four_landmark.format_figure2_csv(rows)
        if args.out:
            Path(args.out).write_text(text)
            out.write(f"{args.out}\n")
        else:
            out.write(text)
        return EXIT_OK

    landmarks, defaults = FIGURES[args.id]
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    grid = GridSpec(n_lines=args.lines, samples=args.samples)
    threads = _threads()
    for fam in families:
        if args.c is None:
            c = defaults.get(fam.name)
            if c is None:
                raise UsageError(f"figure {args.id} has no default support for {fam.name}; pass --c")
        else:
            c = _resolve_c(args.c, fam, landmarks, DEFAULT_SAFETY)
        t = fit(Kernel(fam, c), landmarks)
        doc = deform_grid(t, grid, landmarks, title=f"{fam.label}, c = {c:g}")
        path = outdir / f"fig{args.id}_{fam.name}.svg"
        path.write_text(doc.to_svg())
        field = det_field(t, grid.region, (200, 200), threads)
        out.write(f"{path} c={_fmt(c)} min_det={_fmt(field.min_det)}\n")
    return EXIT_OK


# -------------------------------------------------------------------- parser


def build_parser():
    parser = argparse.ArgumentParser(
        prog="csrbf",
        description="Landmark registration with compactly supported RBFs and "
        "topology-preservation analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("min-support", help="minimum support sizes keeping det J > 0")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--family", choices=KERNEL_NAMES)
    group.add_argument("--all", action="store_true", help="all four kernels, sorted by c_min")
    p.add_argument("--l", type=float, help="exponent for --family gneiting")
    p.add_argument("--delta", type=float, default=1.0, help="max coordinate shift (default 1)")
    p.set_defaults(func=cmd_min_support)

    p = sub.add_parser("fit-warp", help="fit a transformation and warp a PGM/PPM image")
    p.add_argument("--image", required=True, help="input PGM (P5) or PPM (P6)")
    p.add_argument("--landmarks", required=True, help="CSV (sx,sy,tx,ty) or JSON landmarks")
    p.add_argument("--out", required=True, help="output image path")
    p.add_argument("--kernel", choices=KERNEL_NAMES, default="gneiting-7-2")
    p.add_argument("--l", type=float, help="exponent for --kernel gneiting")
    p.add_argument("--c", type=_support_arg, required=True,
                   help="support size, or 'auto' for safety * minimum support")
    p.add_argument("--safety", type=float, default=DEFAULT_SAFETY)
    p.add_argument("--fill", type=int, default=0, help="value for samples outside the input")
    p.add_argument("--det-csv", help="write the Jacobian determinant field here")
    p.add_argument("--det-resolution", type=int, nargs=2, metavar=("NX", "NY"),
                   help="det-field samples (default: one per pixel)")
    p.add_argument("--require-topology", action="store_true",
                   help="exit 3 unless det J > 0 on the whole image")
    p.set_defaults(func=cmd_fit_warp)

    p = sub.add_parser("figures", help="regenerate deformation figures or det curves")
    p.add_argument("--id", required=True, choices=FIGURE_IDS)
    p.add_argument("--kernel", choices=KERNEL_NAMES, action="append",
                   help="repeatable; default: all four kernels")
    p.add_argument("--l", type=float, help="exponent for --kernel gneiting")
    p.add_argument("--c", type=_support_arg, help="override the figure's support size")
    p.add_argument("--delta", type=float, default=0.2, help="rhombus shift for fig2-curve")
    p.add_argument("--y-samples", type=int, default=50, help="samples in (1, 5] for fig2-curve")
    p.add_argument("--lines", type=int, default=21, help="grid lines per axis")
    p.add_argument("--samples", type=int, default=201, help="samples per grid line")
    p.add_argument("--out-dir", default=".", help="directory for SVG files")
    p.add_argument("--out", help="CSV path for fig2-curve (default: stdout)")
    p.set_defaults(func=cmd_figures)
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except (UsageError, InputError, DomainError, OSError) as exc:
        print(f"csrbf {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConditioningError, SingularConfigurationError) as exc:
        print(f"csrbf {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
