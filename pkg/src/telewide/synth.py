"""Test-scene generation and the tele-wide dataset protocol."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .geometry import center_rect
from .types import DisparityMap, GeometryError

DisparityFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


def synth_telewide(left, right, gt: DisparityMap, zoom: float = 2.0):
    """Ordinary stereo pair -> (wide, tele, gt): the tele view is the
    center crop of the right image, kept at wide pixel pitch."""
    left = np.asarray(left, dtype=np.float64)
    right = np.asarray(right, dtype=np.float64)
    if left.shape != right.shape:
        raise GeometryError(f"pair shapes differ: {left.shape} vs {right.shape}")
    if left.shape[0] < 2 or left.shape[1] < 2:
        raise GeometryError("frame must be at least 2x2")
    r = center_rect(left.shape, zoom)
    return left.copy(), right[r.slices].copy(), gt


def constant_disparity(value: float) -> DisparityFn:
    return lambda rows, cols: np.full(np.broadcast(rows, cols).shape, float(value))


def slanted_disparity(d_left: float, d_right: float, width: int) -> DisparityFn:
    """Plane whose disparity rises linearly from d_left at column 0 to
    d_right at the last column."""
    def fn(rows, cols):
        cols = np.broadcast_to(cols, np.broadcast(rows, cols).shape)
        return d_left + (d_right - d_left) * cols / max(width - 1, 1)
    return fn


def parse_disparity_spec(spec: str, width: int) -> DisparityFn:
    """'const:10' or 'slant:3:20'."""
    parts = spec.split(":")
    try:
        if parts[0] == "const" and len(parts) == 2:
            return constant_disparity(float(parts[1]))
        if parts[0] == "slant" and len(parts) == 3:
            return slanted_disparity(float(parts[1]), float(parts[2]), width)
    except ValueError:
        pass
    raise ValueError(f"bad disparity spec {spec!r} (use const:D or slant:D0:D1)")


def gen_rds(shape, disparity_fn: DisparityFn, dot_density: float = 0.5, seed: int = 0):
    """Random-dot stereogram.

    The left image is random dots.  The right image is the left image warped
    by the left-referenced disparity, so that left(y, x) appears at
    right(y, x - d(y, x)).  Integer disparities copy pixels exactly; real
    ones resample the left row linearly.  Right pixels not reached by the
    warp are filled with fresh dots, and gt is invalid where the match
    leaves the frame.
    """
    H, W = int(shape[0]), int(shape[1])
    rng = np.random.default_rng(seed)
    left = (rng.random((H, W)) < dot_density).astype(np.float64)
    fill = (rng.random((H, W)) < dot_density).astype(np.float64)

    rows, cols = np.mgrid[0:H, 0:W]
    d = np.asarray(disparity_fn(rows, cols), dtype=np.float64)
    if d.min() < 0 or d.max() >= W:
        raise ValueError("disparity must lie in [0, width)")
    target = cols - d  # where each left pixel lands in the right image
    if np.any(np.diff(target, axis=1) <= 0):
        raise ValueError("disparity slope must be below 1 px/px (no fold-over)")

    right = fill.copy()
    xs = np.arange(W, dtype=np.float64)
    exact = np.all(d == np.rint(d))
    for y in range(H):
        t = target[y]
        reach = (xs >= t[0]) & (xs <= t[-1])
        if exact:
            src = (xs + d[y, 0]).astype(int) if np.ptp(d[y]) == 0 else None
            if src is not None:
                ok = reach & (src < W)
                right[y, ok] = left[y, src[ok]]
                continue
        # inverse of the monotone map x_left -> x_left - d, then resample
        src = np.interp(xs[reach], t, xs)
        right[y, reach] = np.interp(src, xs, left[y])
    gt_valid = target >= 0
    gt = DisparityMap(np.where(gt_valid, d, 0.0), gt_valid)
    return left, right, gt
