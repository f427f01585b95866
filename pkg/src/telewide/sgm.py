"""Semi-global path aggregation and classical disparity refinement."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .types import CostVolume, DisparityMap

# (dy, dx) scan directions; the first four form the 4-path mode
DIRECTIONS_4 = [(0, 1), (0, -1), (1, 0), (-1, 0)]
DIRECTIONS_8 = DIRECTIONS_4 + [(1, 1), (1, -1), (-1, 1), (-1, -1)]


@dataclass(frozen=True)
class SgmParams:
    p1: float = 10.0
    p2: float = 120.0
    paths: int = 8

    def __post_init__(self):
        if self.p1 < 0 or self.p2 < self.p1:
            raise ValueError(f"need 0 <= p1 <= p2, got p1={self.p1}, p2={self.p2}")
        if self.paths not in (4, 8):
            raise ValueError(f"paths must be 4 or 8, got {self.paths}")


def _step(prev: np.ndarray, cost: np.ndarray, p1: float, p2: float) -> np.ndarray:
    """One recurrence step.  prev and cost have shape (D, N)."""
    prev_min = prev.min(axis=0)
    best = prev.copy()
    np.minimum(best[1:], prev[:-1] + p1, out=best[1:])
    np.minimum(best[:-1], prev[1:] + p1, out=best[:-1])
    np.minimum(best, prev_min + p2, out=best)
    return cost + best - prev_min


def aggregate_path(costs: np.ndarray, direction, p1: float, p2: float) -> np.ndarray:
    """L_r for a single direction r = (dy, dx) over a (D, H, W) volume.

    Scanlines are swept in lockstep: along columns when dx != 0, otherwise
    along rows.  A pixel whose predecessor falls outside the image starts
    its path with L = C.
    """
    dy, dx = direction
    D, H, W = costs.shape
    L = np.empty_like(costs)
    if dx != 0:
        cols = range(W) if dx > 0 else range(W - 1, -1, -1)
        prev_col = None
        for x in cols:
            c = costs[:, :, x]
            if prev_col is None:
                L[:, :, x] = c
            else:
                prev = L[:, :, prev_col]
                out = c.copy()
                if dy == 0:
                    out = _step(prev, c, p1, p2)
                elif dy > 0:
                    out[:, 1:] = _step(prev[:, :-1], c[:, 1:], p1, p2)
                else:
                    out[:, :-1] = _step(prev[:, 1:], c[:, :-1], p1, p2)
                L[:, :, x] = out
            prev_col = x
    else:
        rows = range(H) if dy > 0 else range(H - 1, -1, -1)
        prev_row = None
        for y in rows:
            c = costs[:, y, :]
            if prev_row is None:
                L[:, y, :] = c
            else:
                L[:, y, :] = _step(L[:, prev_row, :], c, p1, p2)
            prev_row = y
    return L


def sgm_aggregate(cv: CostVolume, params: SgmParams = SgmParams()) -> CostVolume:
    """Sum of path costs over 4 or 8 directions (fixed summation order)."""
    dirs = DIRECTIONS_8 if params.paths == 8 else DIRECTIONS_4
    total = np.zeros_like(cv.costs)
    for r in dirs:
        total += aggregate_path(cv.costs, r, params.p1, params.p2)
    out = cv.replace(total)
    out.sentinel = cv.sentinel * params.paths
    return out


def wta(cv: CostVolume) -> DisparityMap:
    """Winner-take-all; np.argmin returns the first (smallest) d on ties."""
    d = np.argmin(cv.costs, axis=0).astype(np.float64)
    return DisparityMap(d, cv.valid.copy())


def lr_consistency(d_left: DisparityMap, d_right: DisparityMap, tol: float = 1.0) -> DisparityMap:
    """Keep a left pixel iff its right-view counterpart agrees within tol."""
    H, W = d_left.shape
    xs = np.arange(W)[None, :] - np.rint(d_left.values).astype(int)
    ys = np.broadcast_to(np.arange(H)[:, None], (H, W))
    inb = (xs >= 0) & (xs < W)
    xc = np.clip(xs, 0, W - 1)
    other = d_right.values[ys, xc]
    ok = (inb & d_left.valid & d_right.valid[ys, xc]
          & (np.abs(d_left.values - other) <= tol))
    values = d_left.values.copy()
    values[~ok] = 0.0
    return DisparityMap(values, ok, d_left.resolution)


def right_view_disparity(cv: CostVolume) -> DisparityMap:
    """WTA disparity referenced to the right image, read off the
    left-referenced volume: C_R(d, y, x) = C_L(d, y, x + d)."""
    D, H, W = cv.costs.shape
    cr = np.full_like(cv.costs, np.inf)
    for d in range(D):
        cr[d, :, :W - d] = cv.costs[d, :, d:]
    d = np.argmin(cr, axis=0).astype(np.float64)
    return DisparityMap(d, np.isfinite(cr.min(axis=0)))


def fill_invalid(dmap: DisparityMap) -> DisparityMap:
    """Fill each invalid pixel with the smaller of the nearest valid values
    to its left and right on the same row (background preferring).  Rows
    without any valid pixel take the global median."""
    if not dmap.valid.any():
        raise ValueError("cannot fill a fully invalid disparity map")
    H, W = dmap.shape
    v = np.where(dmap.valid, dmap.values, np.nan)
    idx = np.where(dmap.valid, np.arange(W)[None, :], -1)
    left_idx = np.maximum.accumulate(idx, axis=1)
    idx_r = np.where(dmap.valid, np.arange(W)[None, :], W)
    right_idx = np.minimum.accumulate(idx_r[:, ::-1], axis=1)[:, ::-1]
    rows = np.arange(H)[:, None]
    from_left = np.where(left_idx >= 0, v[rows, np.clip(left_idx, 0, W - 1)], np.nan)
    from_right = np.where(right_idx < W, v[rows, np.clip(right_idx, 0, W - 1)], np.nan)
    fill = np.fmin(from_left, from_right)
    fill = np.where(np.isnan(fill), np.median(dmap.values[dmap.valid]), fill)
    values = np.where(dmap.valid, dmap.values, fill)
    return DisparityMap(values, np.ones((H, W), dtype=bool), dmap.resolution)
