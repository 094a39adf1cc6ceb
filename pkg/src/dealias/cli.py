"""Command-line front end.

Exit codes: 0 on success, 1 on usage errors, 2 on I/O errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .edges import PeakinessConfig, SOBEL_NORM, detect_edges, mask_to_image
from .fragments import FragmentConfig, extract_fragments
from .chains import trace_chains
from .pipeline import PipelineConfig, aliasing_energy, run_pipeline
from .raster import RasterError, load_image, save_image
from .refine import (CleaningConfig, clean_short_branches, reduce_waving,
                     remove_protruding_pixels)
from .spectral import FilterParams, filter_strength
from .synth import SyntheticSpec, generate_synthetic
from .upsample import upsample_bilinear, upsample_catmull_rom


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage problems; the CLI contract wants 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_detector_flags(p):
    p.add_argument("--n-angles", type=int, default=7, help="scan angle count N")
    p.add_argument("--p-max", type=int, default=3, help="bump-test passes")
    p.add_argument("--e-min", type=int, default=6, help="peakiness threshold")
    p.add_argument("--grad-norm", type=float, default=SOBEL_NORM,
                   help="gradient normalization constant")
    p.add_argument("--mirror-angles", action="store_true",
                   help="also scan mirrored angles in (-pi/2, 0)")


def _add_cleanup_flags(p):
    p.add_argument("--l-min", type=int, default=4, help="minimum edge length")
    p.add_argument("--l1", type=int, default=3, help="junction budget factor")
    p.add_argument("--l2", type=int, default=1, help="junction budget offset")
    p.add_argument("--n-w", type=int, default=50, help="max waving sweeps")


def _add_filter_flags(p):
    p.add_argument("--s-d", type=float, default=0.4,
                   help="fragment straightness coefficient")
    p.add_argument("--s-l", type=float, default=2.0,
                   help="fragment length gate, in periods")
    p.add_argument("--s-u", type=float, default=0.25,
                   help="filter strength growth factor")
    p.add_argument("--w-s", type=float, default=3.0,
                   help="spectral mean weight width")
    p.add_argument("--m-s", type=float, default=0.03,
                   help="flattening valley width")


def _peakiness_config(args) -> PeakinessConfig:
    return PeakinessConfig(n_angles=args.n_angles, p_max=args.p_max,
                           e_min=args.e_min,
                           include_mirrored=args.mirror_angles)


def _cleaning_config(args) -> CleaningConfig:
    return CleaningConfig(l_min=args.l_min, l1=args.l1, l2=args.l2,
                          n_w=args.n_w)


def _pipeline_config(args, upsampler: str, scale: int) -> PipelineConfig:
    return PipelineConfig(
        scale=scale,
        upsampler=upsampler,
        peakiness=_peakiness_config(args),
        cleaning=_cleaning_config(args),
        s_d=args.s_d,
        filter_params=FilterParams(s_l=args.s_l, s_u=args.s_u,
                                   w_s=args.w_s, m_s=args.m_s),
        grad_norm=args.grad_norm,
        dump_dir=Path(args.dump_dir) if args.dump_dir else None,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dealias",
                     description="Remove raster aliasing from upsampled images.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("upsample", parents=[], help="upsample an image")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--scale", type=int, required=True)
    p.add_argument("--upsampler", choices=["catmull-rom", "bilinear"],
                   default="catmull-rom")

    p = sub.add_parser("edges", help="write the refined edge map as PGM")
    p.add_argument("input")
    p.add_argument("output")
    _add_detector_flags(p)
    _add_cleanup_flags(p)

    for name, help_text in (
        ("filter", "filter a pre-upsampled image"),
        ("pipeline", "upsample and filter in one run"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("input")
        p.add_argument("output")
        if name == "pipeline":
            p.add_argument("--scale", type=int, default=None,
                           help="upsample the input by this factor")
            p.add_argument("--upsampler", choices=["catmull-rom", "bilinear"],
                           default="catmull-rom")
        p.add_argument("--assume-scale", type=int, default=None,
                       help="input is already upsampled by this factor")
        _add_detector_flags(p)
        _add_cleanup_flags(p)
        _add_filter_flags(p)
        p.add_argument("--dump-dir", default=None,
                       help="write stage artifacts into this directory")

    p = sub.add_parser("synth", help="generate a synthetic aliased test image")
    p.add_argument("output")
    p.add_argument("--size", type=int, default=64)
    p.add_argument("--slope", default="4:1",
                   help="edge direction as DX:DY (default 4:1)")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--unsharp", type=float, default=0.0)

    p = sub.add_parser("measure", help="report per-fragment aliasing energy")
    p.add_argument("input")
    p.add_argument("--assume-scale", type=int, required=True)
    _add_detector_flags(p)
    _add_cleanup_flags(p)
    _add_filter_flags(p)
    p.add_argument("--dump-dir", default=None)

    return parser


def _refined_mask(image, args):
    mask = detect_edges(image, _peakiness_config(args), args.grad_norm)
    mask = clean_short_branches(mask, args.l_min)
    mask = remove_protruding_pixels(mask)
    return reduce_waving(mask, _cleaning_config(args))


def _cmd_upsample(args) -> int:
    image = load_image(args.input)
    up = (upsample_catmull_rom if args.upsampler == "catmull-rom"
          else upsample_bilinear)
    save_image(up(image, args.scale), args.output)
    return 0


def _cmd_edges(args) -> int:
    image = load_image(args.input)
    save_image(mask_to_image(_refined_mask(image, args)), args.output)
    return 0


def _cmd_run(args, parser) -> int:
    scale = getattr(args, "scale", None)
    assume = args.assume_scale
    if scale is not None and assume is not None:
        parser.error("--scale and --assume-scale are mutually exclusive")
    if scale is None and assume is None:
        parser.error("one of --scale or --assume-scale is required")
    if assume is not None:
        cfg = _pipeline_config(args, "none", assume)
    else:
        cfg = _pipeline_config(args, args.upsampler, scale)
    image = load_image(args.input)
    filtered, report = run_pipeline(image, cfg)
    save_image(filtered, args.output)
    sys.stdout.write(report.to_text())
    return 0


def _cmd_synth(args) -> int:
    try:
        dx, dy = (int(part) for part in args.slope.split(":"))
    except ValueError:
        raise ValueError(f"slope must look like DX:DY, got {args.slope!r}")
    image, line = generate_synthetic(SyntheticSpec(
        size=args.size, slope=(dx, dy), gamma=args.gamma,
        unsharp=args.unsharp))
    save_image(image, args.output)
    print(f"edge point={line.point[0]},{line.point[1]} "
          f"direction={line.direction[0]},{line.direction[1]}")
    return 0


def _cmd_measure(args) -> int:
    image = load_image(args.input)
    mask = _refined_mask(image, args)
    params = FilterParams(s_l=args.s_l, s_u=args.s_u, w_s=args.w_s,
                          m_s=args.m_s)
    cfg = FragmentConfig(s_d=args.s_d, scale=args.assume_scale)
    index = 0
    for chain in trace_chains(mask):
        for fragment in extract_fragments(chain, cfg):
            if fragment.l0 is None:
                print(f"fragment id={index} n_b={fragment.n_b} l0=undefined")
            else:
                s_f = filter_strength(fragment.n_b, fragment.l0, params)
                energy = aliasing_energy(image, fragment)
                print(f"fragment id={index} n_b={fragment.n_b} "
                      f"l0={fragment.l0:.6g} s_f={s_f} energy={energy:.6g}")
            index += 1
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "upsample":
            return _cmd_upsample(args)
        if args.command == "edges":
            return _cmd_edges(args)
        if args.command in ("filter", "pipeline"):
            return _cmd_run(args, parser)
        if args.command == "synth":
            return _cmd_synth(args)
        if args.command == "measure":
            return _cmd_measure(args)
        parser.error(f"unknown command {args.command!r}")
    except (RasterError, OSError) as exc:
        print(f"dealias: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"dealias: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
