"""Command-line entry point.

Exit codes: 0 success, 2 missing input file (or bad usage), 3 invalid
configuration, 4 computation failure.  Diagnostics go to stderr; machine
output goes to the declared files or stdout.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .bokeh import FocusPoint, postprocess_for_bokeh, render_bokeh
from .config import ConfigError, PipelineConfig
from .fusion import decision_select, smooth_boundary_strip, sparse_sample
from .io import load_disparity, read_image, save_disparity, write_image, write_sparse
from .metrics import CSV_HEADER, region_report
from .pipeline import estimate
from .surround import extrapolate_surround, load_external_surround
from .synth import gen_rds, parse_disparity_spec, synth_telewide

EXIT_MISSING = 2
EXIT_CONFIG = 3
EXIT_COMPUTE = 4


class MissingInput(Exception):
    pass


def _need(*paths):
    for p in paths:
        if p is not None and not Path(p).is_file():
            raise MissingInput(f"no such file: {p}")


def _config(args) -> PipelineConfig:
    path = getattr(args, "config", None)
    if path is None:
        return PipelineConfig()
    _need(path)
    return PipelineConfig.load(path)


def _gray_or_rgb_guidance(path, shape):
    img = read_image(path)
    if img.shape[:2] != tuple(shape):
        raise ValueError(f"guidance image {img.shape[:2]} does not match map {tuple(shape)}")
    return img


def cmd_estimate(args):
    _need(args.left, args.tele)
    cfg = _config(args)
    wide = read_image(args.left)
    tele = read_image(args.tele)
    kw = {"soft": not args.wta}
    if args.mode == "tele":
        kw["embed"] = not args.native
    d = estimate(wide, tele, cfg, args.mode, **kw)
    save_disparity(args.out, d)


def cmd_surround(args):
    _need(args.center_disp, args.wide, args.external)
    cfg = _config(args)
    wide = read_image(args.wide)
    if args.external:
        out = load_external_surround(args.external, wide.shape[:2])
    else:
        center = load_disparity(args.center_disp)
        geom = cfg.geometry(wide.shape)
        out = extrapolate_surround(center, wide, geom, cfg.surround)
    save_disparity(args.out, out)


def cmd_fuse(args):
    _need(args.sm, args.side, args.wide)
    cfg = _config(args)
    sm = load_disparity(args.sm)
    side = load_disparity(args.side)
    geom = cfg.geometry(sm.shape)
    merged = decision_select(sm, side, geom.rect)
    guide = (_gray_or_rgb_guidance(args.wide, sm.shape) if args.wide
             else np.zeros(sm.shape))
    out = smooth_boundary_strip(merged, guide, geom.rect, cfg.fusion)
    save_disparity(args.out, out)


def cmd_sample(args):
    _need(args.map, args.surround_map)
    cfg = _config(args)
    center = load_disparity(args.map)
    surround = load_disparity(args.surround_map) if args.surround_map else None
    seed = cfg.seed if args.seed is None else args.seed
    sp = sparse_sample(center, surround, cfg.geometry(center.shape), cfg.fusion, seed,
                       source_center=Path(args.map).name,
                       source_surround=Path(args.surround_map).name if args.surround_map else "")
    write_sparse(args.out, sp)


def _focus(text: str) -> FocusPoint:
    try:
        r, c = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"focus must be R,C, got {text!r}")
    return FocusPoint(r, c)


def cmd_bokeh(args):
    _need(args.wide, args.disp)
    cfg = _config(args)
    rgb = read_image(args.wide)
    d = load_disparity(args.disp)
    if rgb.shape[:2] != d.shape:
        raise ValueError(f"image {rgb.shape[:2]} and disparity {d.shape} differ")
    d2 = postprocess_for_bokeh(d, args.focus, cfg.clamp_negative)
    out = render_bokeh(rgb, d2, args.focus, cfg.bokeh)
    write_image(args.out, out)
    if args.out_disp:
        save_disparity(args.out_disp, d2)


def cmd_eval(args):
    _need(args.est, args.gt)
    cfg = _config(args)
    est = load_disparity(args.est)
    gt = load_disparity(args.gt)
    rep = region_report(est, gt, cfg.geometry(gt.shape).rect, args.metric)
    if args.csv:
        print(CSV_HEADER)
        print(rep.to_csv())
    else:
        print(rep.table(args.name))


def cmd_synth(args):
    _need(args.left, args.right, args.gt)
    cfg = _config(args)
    left = read_image(args.left)
    right = read_image(args.right)
    gt = load_disparity(args.gt)
    wide, tele, gt = synth_telewide(left, right, gt, cfg.zoom)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_image(out / "wide.png", wide)
    write_image(out / "tele.png", tele)
    save_disparity(out / "gt.pfm", gt)


def _shape(text: str):
    try:
        h, w = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"shape must be HxW, got {text!r}")
    return h, w


def cmd_gen_rds(args):
    h, w = args.shape
    fn = parse_disparity_spec(args.disp, w)
    left, right, gt = gen_rds((h, w), fn, args.density, args.seed)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_image(out / "left.png", left)
    write_image(out / "right.png", right)
    save_disparity(out / "gt.pfm", gt)


def cmd_defaults(args):
    text = PipelineConfig().to_text()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="telewide", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("estimate", help="stereo disparity from a wide/tele pair")
    s.add_argument("--left", required=True, help="wide (left) image")
    s.add_argument("--tele", required=True, help="tele (right) image")
    s.add_argument("--mode", choices=["tele", "wide"], default="wide")
    s.add_argument("--config")
    s.add_argument("--out", required=True, help=".pfm or .png disparity")
    s.add_argument("--native", action="store_true",
                   help="tele mode: keep tele resolution instead of embedding in the wide frame")
    s.add_argument("--wta", action="store_true", help="winner-take-all readout")
    s.set_defaults(fn=cmd_estimate)

    s = sub.add_parser("surround", help="full-FOV map from a center estimate")
    s.add_argument("--center-disp", required=True)
    s.add_argument("--wide", required=True)
    s.add_argument("--external", help="use this precomputed full-FOV map instead")
    s.add_argument("--config")
    s.add_argument("--out", required=True)
    s.set_defaults(fn=cmd_surround)

    s = sub.add_parser("fuse", help="decision selection + boundary strip smoothing")
    s.add_argument("--sm", required=True, help="stereo map (trusted in the center)")
    s.add_argument("--side", required=True, help="full-FOV map (trusted in the surround)")
    s.add_argument("--wide", help="guidance image (uniform guidance if omitted)")
    s.add_argument("--config")
    s.add_argument("--out", required=True)
    s.set_defaults(fn=cmd_fuse)

    s = sub.add_parser("sample", help="sparse disparity samples (TWSPARSE)")
    s.add_argument("--map", required=True)
    s.add_argument("--surround-map")
    s.add_argument("--config")
    s.add_argument("--seed", type=int)
    s.add_argument("--out", required=True)
    s.set_defaults(fn=cmd_sample)

    s = sub.add_parser("bokeh", help="disparity clean-up and synthetic defocus")
    s.add_argument("--wide", required=True)
    s.add_argument("--disp", required=True)
    s.add_argument("--focus", required=True, type=_focus, help="R,C")
    s.add_argument("--config")
    s.add_argument("--out", required=True)
    s.add_argument("--out-disp", help="also write the post-processed disparity")
    s.set_defaults(fn=cmd_bokeh)

    s = sub.add_parser("eval", help="error-all / error-cen / error-sur report")
    s.add_argument("--est", required=True)
    s.add_argument("--gt", required=True)
    s.add_argument("--config")
    s.add_argument("--metric", choices=["outlier", "epe"], default="outlier")
    s.add_argument("--name", default="estimate")
    s.add_argument("--csv", action="store_true")
    s.set_defaults(fn=cmd_eval)

    s = sub.add_parser("synth", help="stereo pair -> wide/tele pair (dataset protocol)")
    s.add_argument("--left", required=True)
    s.add_argument("--right", required=True)
    s.add_argument("--gt", required=True)
    s.add_argument("--config")
    s.add_argument("--out-dir", required=True)
    s.set_defaults(fn=cmd_synth)

    s = sub.add_parser("gen-rds", help="random-dot stereogram test scene")
    s.add_argument("--shape", type=_shape, required=True, help="HxW")
    s.add_argument("--disp", required=True, help="const:D or slant:D0:D1")
    s.add_argument("--density", type=float, default=0.5)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out-dir", required=True)
    s.set_defaults(fn=cmd_gen_rds)

    s = sub.add_parser("defaults", help="print the default config")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_defaults)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.fn(args)
    except MissingInput as exc:
        print(f"telewide: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except ConfigError as exc:
        print(f"telewide: invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - every other failure maps to one code
        print(f"telewide: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    return 0


if __name__ == "__main__":
    sys.exit(main())
