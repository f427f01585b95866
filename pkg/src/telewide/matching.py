"""Per-disparity matching costs (SAD and census/Hamming)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.ndimage import uniform_filter

from .types import CostVolume, GeometryError, Rect


def to_gray(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img, dtype=np.float64)
    return img.mean(axis=2) if img.ndim == 3 else img


@dataclass
class CensusPlane:
    codes: np.ndarray  # uint64 (H, W)
    nbits: int

    @property
    def shape(self):
        return self.codes.shape


def census_transform(img: np.ndarray, win: int = 5) -> CensusPlane:
    """Bit k is set iff the k-th window neighbour (raster order, centre
    skipped) is darker than the centre pixel.  Edges are replicated."""
    if win < 3 or win % 2 == 0:
        raise ValueError(f"census window must be odd and >= 3, got {win}")
    if win * win - 1 > 64:
        raise ValueError("census window too large for 64-bit codes")
    g = to_gray(img)
    r = win // 2
    H, W = g.shape
    padded = np.pad(g, r, mode="edge")
    codes = np.zeros((H, W), dtype=np.uint64)
    bit = 0
    for dy in range(win):
        for dx in range(win):
            if dy == r and dx == r:
                continue
            neigh = padded[dy:dy + H, dx:dx + W]
            codes |= (neigh < g).astype(np.uint64) << np.uint64(bit)
            bit += 1
    return CensusPlane(codes, bit)


def _right_support(shape, dmax: int, valid_right: Optional[Rect]) -> np.ndarray:
    H, W = shape
    x = np.arange(W)
    if valid_right is None:
        r0, r1, c0, c1 = 0, H, 0, W
    else:
        r0, r1 = valid_right.row0, valid_right.row0 + valid_right.height
        c0, c1 = valid_right.col0, valid_right.col0 + valid_right.width
    rows_ok = np.zeros(H, dtype=bool)
    rows_ok[r0:r1] = True
    support = np.empty((dmax, H, W), dtype=bool)
    for d in range(dmax):
        xr = x - d
        cols_ok = (xr >= 0) & (xr >= c0) & (xr < c1)
        support[d] = rows_ok[:, None] & cols_ok[None, :]
    return support


def _shifted(right: np.ndarray, d: int) -> np.ndarray:
    """right(y, x - d) with the left border replicated."""
    if d == 0:
        return right
    out = np.empty_like(right)
    out[:, d:] = right[:, :-d]
    out[:, :d] = right[:, :1]
    return out


def build_cost_volume(left, right, dmax: int, metric: str = "census", win: int = 5,
                      valid_right: Optional[Rect] = None) -> CostVolume:
    """cost(d, y, x) compares left(y, x) with right(y, x - d).

    Entries whose match falls outside the image or outside ``valid_right``
    get the metric's maximum value.  A pixel is valid iff at least one
    disparity has a real match.
    """
    left = to_gray(left)
    right = to_gray(right)
    if left.shape != right.shape:
        raise GeometryError(f"pair shapes differ: {left.shape} vs {right.shape}")
    H, W = left.shape
    if not 1 <= dmax < W:
        raise ValueError(f"dmax must be in [1, {W - 1}], got {dmax}")
    if win < 1 or win % 2 == 0:
        raise ValueError(f"window must be odd, got {win}")

    if metric == "sad":
        sentinel = float(win * win)
        costs = np.empty((dmax, H, W))
        for d in range(dmax):
            diff = np.abs(left - _shifted(right, d))
            costs[d] = uniform_filter(diff, size=win, mode="nearest") * (win * win)
        # running-sum round-off must not push costs negative
        np.maximum(costs, 0.0, out=costs)
    elif metric == "census":
        cl = census_transform(left, win).codes
        cr = census_transform(right, win).codes
        sentinel = float(win * win - 1)
        costs = np.empty((dmax, H, W))
        for d in range(dmax):
            costs[d] = np.bitwise_count(cl ^ _shifted(cr, d))
    else:
        raise ValueError(f"unknown metric {metric!r}")

    support = _right_support((H, W), dmax, valid_right)
    costs[~support] = sentinel
    valid = support.any(axis=0)
    costs[:, ~valid] = sentinel
    return CostVolume(costs, valid, sentinel, support)


def restrict_validity(cv: CostVolume, rect: Rect) -> CostVolume:
    """Invalidate every pixel outside ``rect`` (costs set to the sentinel)."""
    keep = rect.mask(cv.shape)
    costs = cv.costs.copy()
    costs[:, ~keep] = cv.sentinel
    support = None if cv.support is None else cv.support & keep[None]
    return CostVolume(costs, cv.valid & keep, cv.sentinel, support)


def build_telewide_cost_volume(left, right, valid_rect: Rect, dmax: int,
                               metric: str = "census", win: int = 5) -> CostVolume:
    """Cost volume for a zero-padded wide pair: only the tele region is
    trusted, every surround pixel is flagged invalid."""
    cv = build_cost_volume(left, right, dmax, metric, win, valid_right=valid_rect)
    return restrict_validity(cv, valid_rect)


def box_aggregate(cv: CostVolume, radius: int) -> CostVolume:
    """Per-disparity box mean; unsupported entries are left out of the mean."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    if radius == 0:
        return cv.replace(cv.costs.copy())
    size = (1, 2 * radius + 1, 2 * radius + 1)
    w = cv.support if cv.support is not None else np.broadcast_to(cv.valid, cv.costs.shape)
    w = w.astype(np.float64)
    num = uniform_filter(cv.costs * w, size=size, mode="nearest")
    den = uniform_filter(w, size=size, mode="nearest")
    out = np.full_like(cv.costs, cv.sentinel)
    ok = den > 1e-12
    out[ok] = num[ok] / den[ok]
    out[:, ~cv.valid] = cv.sentinel
    if cv.support is not None:
        out[~cv.support] = cv.sentinel
    return cv.replace(out)
