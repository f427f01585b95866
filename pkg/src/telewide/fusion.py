"""Combining the stereo (center) and single-view (surround) disparity maps."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fgs import FgsParams, fgs_smooth
from .geometry import TeleWideGeometry
from .types import DisparityMap, GeometryError, Rect


@dataclass(frozen=True)
class FusionConfig:
    rate_center: float = 0.20
    rate_surround: float = 0.12
    strip_width: int = 8
    fgs: FgsParams = field(default_factory=FgsParams)

    def __post_init__(self):
        for name in ("rate_center", "rate_surround"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if self.strip_width < 0:
            raise ValueError("strip_width must be non-negative")


@dataclass
class SparseDisparity:
    shape: tuple[int, int]
    rows: np.ndarray
    cols: np.ndarray
    values: np.ndarray
    seed: int
    source_center: str = "center"
    source_surround: str = "surround"

    def __len__(self):
        return len(self.rows)

    def to_map(self) -> DisparityMap:
        values = np.zeros(self.shape)
        valid = np.zeros(self.shape, dtype=bool)
        values[self.rows, self.cols] = self.values
        valid[self.rows, self.cols] = True
        return DisparityMap(values, valid)


def decision_select(sm_map: DisparityMap, side_map: DisparityMap, rect: Rect) -> DisparityMap:
    """Stereo result inside ``rect``, single-view result everywhere else."""
    if sm_map.shape != side_map.shape:
        raise GeometryError(f"shape mismatch {sm_map.shape} vs {side_map.shape}")
    if not rect.fits(sm_map.shape):
        raise GeometryError(f"{rect} does not fit {sm_map.shape}")
    if not sm_map.valid[rect.slices].all():
        raise ValueError("stereo map must be dense on the tele region")
    out = side_map.copy()
    out.values[rect.slices] = sm_map.values[rect.slices]
    out.valid[rect.slices] = True
    return out


def _round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))


def _draw(rng: np.random.Generator, candidates: np.ndarray, count: int, what: str) -> np.ndarray:
    if count > len(candidates):
        raise ValueError(f"requested {count} {what} samples, only {len(candidates)} valid pixels")
    return np.sort(rng.permutation(candidates)[:count])


def sparse_sample(center_map: DisparityMap, surround_map: DisparityMap | None,
                  geom: TeleWideGeometry, cfg: FusionConfig = FusionConfig(),
                  seed: int = 0, source_center: str = "center",
                  source_surround: str = "surround") -> SparseDisparity:
    """Uniform sampling without replacement: ``rate_center`` of the tele
    region pixels, plus ``rate_surround`` of the surround pixels when a
    surround map is given."""
    shape = geom.wide_shape
    if center_map.shape != shape:
        raise GeometryError(f"map {center_map.shape} != wide {shape}")
    r = geom.rect
    inside = r.mask(shape)
    if not center_map.valid[inside].all():
        raise ValueError("center map must be valid on the tele region")
    rng = np.random.default_rng(seed)
    flat_in = np.flatnonzero(inside)
    n_c = _round_half_up(cfg.rate_center * r.area)
    picks = _draw(rng, flat_in, n_c, "center")
    vals = center_map.values.ravel()[picks]

    if surround_map is not None:
        if surround_map.shape != shape:
            raise GeometryError(f"surround map {surround_map.shape} != wide {shape}")
        n_sur_total = shape[0] * shape[1] - r.area
        n_s = _round_half_up(cfg.rate_surround * n_sur_total)
        flat_out = np.flatnonzero(~inside & surround_map.valid)
        picks_s = _draw(rng, flat_out, n_s, "surround")
        picks = np.concatenate([picks, picks_s])
        vals = np.concatenate([vals, surround_map.values.ravel()[picks_s]])

    rows, cols = np.unravel_index(picks, shape)
    return SparseDisparity(shape, rows.astype(np.int64), cols.astype(np.int64),
                           vals.astype(np.float64), int(seed), source_center, source_surround)


def strip_mask(shape, rect: Rect, width: int) -> np.ndarray:
    """Pixels within Chebyshev distance ``width`` of the rect border, on
    either side.  Inside pixels measure distance to the nearest in-frame
    outside pixel, outside pixels to the nearest rect pixel."""
    H, W = shape[:2]
    if width <= 0 or rect.area == 0:
        return np.zeros((H, W), dtype=bool)
    y = np.arange(H)[:, None]
    x = np.arange(W)[None, :]
    r0, c0 = rect.row0, rect.col0
    r1, c1 = r0 + rect.height - 1, c0 + rect.width - 1
    inside = (y >= r0) & (y <= r1) & (x >= c0) & (x <= c1)

    big = H + W
    d_in = np.full((H, W), big)
    if r0 > 0:
        d_in = np.minimum(d_in, y - r0 + 1)
    if r1 < H - 1:
        d_in = np.minimum(d_in, r1 - y + 1)
    if c0 > 0:
        d_in = np.minimum(d_in, x - c0 + 1)
    if c1 < W - 1:
        d_in = np.minimum(d_in, c1 - x + 1)

    dy = np.maximum(np.maximum(r0 - y, y - r1), 0)
    dx = np.maximum(np.maximum(c0 - x, x - c1), 0)
    d_out = np.maximum(dy, dx)
    return np.where(inside, d_in <= width, d_out <= width)


def smooth_boundary_strip(merged: DisparityMap, wide_rgb: np.ndarray, rect: Rect,
                          cfg: FusionConfig = FusionConfig()) -> DisparityMap:
    """Replace the border strip of a merged map with its FGS-filtered version."""
    strip = strip_mask(merged.shape, rect, cfg.strip_width)
    out = merged.copy()
    if not strip.any():
        return out
    if not merged.valid.all():
        raise ValueError("merged map must be dense")
    filtered = fgs_smooth(merged.values, np.asarray(wide_rgb, dtype=np.float64), cfg.fgs)
    out.values[strip] = filtered[strip]
    return out


def fuse(sm_map: DisparityMap, side_map: DisparityMap, wide_rgb: np.ndarray, rect: Rect,
         cfg: FusionConfig = FusionConfig()) -> DisparityMap:
    """Decision selection followed by boundary-strip smoothing."""
    return smooth_boundary_strip(decision_select(sm_map, side_map, rect), wide_rgb, rect, cfg)
