"""Disparity clean-up around a focus point, and depth-dependent blur.

The clean-up keeps the foreground blob that contains the focus point and
suppresses every other blob in the focus disparity band, according to
its distance from non-foreground pixels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .types import DisparityMap

FOREGROUND_LOW = 0.7
FOREGROUND_HIGH = 1.3
_FOUR_CONNECTED = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]])


@dataclass(frozen=True)
class FocusPoint:
    row: int
    col: int


@dataclass
class ComponentLabels:
    labels: np.ndarray
    n: int


@dataclass(frozen=True)
class BokehParams:
    r_max: float = 12.0
    d_range: float | None = None
    kernel: str = "disc"
    clamp_negative: bool = True

    def __post_init__(self):
        if self.r_max < 0:
            raise ValueError("r_max must be non-negative")
        if self.kernel not in ("disc", "gaussian"):
            raise ValueError(f"unknown kernel {self.kernel!r}")


def _focus_disparity(d: DisparityMap, fp: FocusPoint) -> float:
    H, W = d.shape
    if not (0 <= fp.row < H and 0 <= fp.col < W):
        raise ValueError(f"focus point {fp} outside {d.shape}")
    if not d.valid[fp.row, fp.col] or not d.values[fp.row, fp.col] > 0:
        raise ValueError("focus disparity must be valid and positive")
    return float(d.values[fp.row, fp.col])


def foreground_mask(d: DisparityMap, fp: FocusPoint) -> np.ndarray:
    df = _focus_disparity(d, fp)
    v = d.values
    return d.valid & (FOREGROUND_LOW * df <= v) & (v <= FOREGROUND_HIGH * df)


def connected_components(mask: np.ndarray) -> ComponentLabels:
    """4-connected labeling; ids follow raster order of first pixels."""
    labels, n = ndimage.label(np.asarray(mask, dtype=bool), structure=_FOUR_CONNECTED)
    return ComponentLabels(labels.astype(np.int64), int(n))


def _edt_1d(f: list[float]) -> list[float]:
    """Squared distance transform of a sampled function (lower envelope of
    parabolas rooted at each sample)."""
    n = len(f)
    out = [0.0] * n
    v = [0] * n
    z = [0.0] * (n + 1)
    k = -1
    for q in range(n):
        if f[q] == math.inf:
            continue
        if k < 0:
            k = 0
            v[0] = q
            z[0] = -math.inf
            z[1] = math.inf
            continue
        while True:
            p = v[k]
            s = ((f[q] + q * q) - (f[p] + p * p)) / (2 * q - 2 * p)
            if s <= z[k]:
                k -= 1
                if k < 0:
                    break
            else:
                break
        k += 1
        v[k] = q
        z[k] = -math.inf if k == 0 else s
        z[k + 1] = math.inf
    if k < 0:
        return [math.inf] * n
    j = 0
    for q in range(n):
        while z[j + 1] < q:
            j += 1
        p = v[j]
        out[q] = (q - p) ** 2 + f[p]
    return out


def squared_edt(background: np.ndarray) -> np.ndarray:
    """Exact squared Euclidean distance to the nearest True pixel."""
    bg = np.asarray(background, dtype=bool)
    H, W = bg.shape
    # column pass: distance along each column via two scans
    big = float(H + W) ** 2
    col = np.full((H, W), np.inf)
    run = np.full(W, np.inf)
    for y in range(H):
        run = np.where(bg[y], 0.0, run + 1)
        col[y] = run
    run = np.full(W, np.inf)
    for y in range(H - 1, -1, -1):
        run = np.where(bg[y], 0.0, run + 1)
        col[y] = np.minimum(col[y], run)
    col = np.where(np.isfinite(col), col ** 2, math.inf)
    out = np.empty((H, W))
    for y in range(H):
        out[y] = _edt_1d(col[y].tolist())
    out[~np.isfinite(out)] = big
    return out


def distance_to_nonforeground(labels: ComponentLabels | np.ndarray) -> np.ndarray:
    lab = labels.labels if isinstance(labels, ComponentLabels) else np.asarray(labels)
    background = lab == 0
    if not background.any():
        raise ValueError("no non-foreground pixel to measure distance to")
    return np.sqrt(squared_edt(background))


def suppress_nonfocus(d: DisparityMap, labels: ComponentLabels, focus_component: int,
                      p: np.ndarray, clamp_negative: bool = True) -> DisparityMap:
    """d' = d (1 - 2p) / p on every non-focus component, optionally clamped
    at zero.  Pixels already at zero disparity are skipped."""
    lab = labels.labels
    sel = (lab > 0) & (lab != focus_component) & (d.values != 0)
    out = d.copy()
    pv = p[sel]
    new = d.values[sel] * (1.0 - 2.0 * pv) / pv
    if clamp_negative:
        new = np.maximum(new, 0.0)
    out.values[sel] = new
    return out


def postprocess_for_bokeh(d: DisparityMap, fp: FocusPoint, clamp_negative: bool = True) -> DisparityMap:
    mask = foreground_mask(d, fp)
    comps = connected_components(mask)
    t = int(comps.labels[fp.row, fp.col])
    if comps.n <= 1:
        return d.copy()
    p = distance_to_nonforeground(comps)
    return suppress_nonfocus(d, comps, t, p, clamp_negative)


def blur_kernel(radius: float, kind: str = "disc") -> np.ndarray:
    r = int(math.ceil(radius))
    yy, xx = np.mgrid[-r:r + 1, -r:r + 1]
    rr = yy ** 2 + xx ** 2
    k = (rr <= radius ** 2).astype(np.float64)
    if kind == "gaussian":
        sigma = max(radius / 2.0, 1e-6)
        k *= np.exp(-rr / (2 * sigma ** 2))
    return k / k.sum()


def blur(img: np.ndarray, radius: float, kind: str = "disc") -> np.ndarray:
    k = blur_kernel(radius, kind)
    img = np.asarray(img, dtype=np.float64)
    if img.ndim == 2:
        return ndimage.correlate(img, k, mode="nearest")
    return np.stack([ndimage.correlate(img[..., c], k, mode="nearest")
                     for c in range(img.shape[2])], axis=2)


def blur_radius(d: DisparityMap, fp: FocusPoint, params: BokehParams) -> np.ndarray:
    d_range = params.d_range
    if d_range is None:
        v = d.values[d.valid]
        d_range = float(v.max() - v.min()) if v.size else 0.0
    if d_range <= 0:
        return np.zeros(d.shape)
    focus = d.values[fp.row, fp.col]
    return params.r_max * np.minimum(1.0, np.abs(d.values - focus) / d_range)


def render_bokeh(rgb: np.ndarray, d: DisparityMap, fp: FocusPoint,
                 params: BokehParams = BokehParams()) -> np.ndarray:
    """Layered synthetic defocus.

    The blur radius grows linearly with |d - d(focus)|.  Radii are rounded
    to integer layers; each layer blurs the whole image once and pixels
    take the layer matching their radius.  Radii below 0.5 px keep the
    source pixel.
    """
    rgb = np.asarray(rgb, dtype=np.float64)
    out = rgb.copy()
    if params.r_max == 0:
        return out
    r = blur_radius(d, fp, params)
    n_layers = int(math.ceil(params.r_max))
    layer = np.minimum(np.floor(r + 0.5), n_layers).astype(int)
    for k in range(1, n_layers + 1):
        sel = layer == k
        if sel.any():
            out[sel] = blur(rgb, min(float(k), params.r_max), params.kernel)[sel]
    return out
