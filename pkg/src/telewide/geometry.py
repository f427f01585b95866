"""Tele-wide field-of-view geometry and the two stereo input constructions.

The tele camera sees the center 1/Z of the wide frame.  Two input modes
are accepted for the tele image and detected from its shape:

* device mode: tele has the full wide shape (its pixels are Z times finer)
* dataset mode: tele has the center-rect shape (already at wide pitch,
  as produced by cropping the right image of an ordinary stereo pair)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .types import DisparityMap, GeometryError, Rect


def center_rect(wide_shape, zoom: float) -> Rect:
    if zoom < 1:
        raise GeometryError(f"zoom must be >= 1, got {zoom}")
    H, W = int(wide_shape[0]), int(wide_shape[1])
    h = math.floor(H / zoom)
    w = math.floor(W / zoom)
    return Rect((H - h) // 2, (W - w) // 2, h, w)


@dataclass(frozen=True)
class TeleWideGeometry:
    zoom: float
    wide_shape: tuple[int, int]
    focal_px: float = 700.0
    baseline_m: float = 0.5

    def __post_init__(self):
        if self.focal_px <= 0 or self.baseline_m <= 0:
            raise GeometryError("focal length and baseline must be positive")
        object.__setattr__(self, "wide_shape",
                           (int(self.wide_shape[0]), int(self.wide_shape[1])))
        center_rect(self.wide_shape, self.zoom)  # validates zoom

    @property
    def rect(self) -> Rect:
        return center_rect(self.wide_shape, self.zoom)

    @property
    def tele_shape(self) -> tuple[int, int]:
        """Shape of the tele image at its native (zoomed) resolution."""
        r = self.rect
        return (round(r.height * self.zoom), round(r.width * self.zoom))

    def center_mask(self) -> np.ndarray:
        return self.rect.mask(self.wide_shape)


# -- resampling ---------------------------------------------------------------

def _linear_axis(n_src: int, n_dst: int):
    # half-pixel aligned sample positions, clamped to the border
    pos = (np.arange(n_dst) + 0.5) * (n_src / n_dst) - 0.5
    pos = np.clip(pos, 0, n_src - 1)
    i0 = np.floor(pos).astype(int)
    i1 = np.minimum(i0 + 1, n_src - 1)
    return i0, i1, pos - i0


def _nearest_axis(n_src: int, n_dst: int) -> np.ndarray:
    idx = np.floor((np.arange(n_dst) + 0.5) * (n_src / n_dst)).astype(int)
    return np.clip(idx, 0, n_src - 1)


def resample_image(img: np.ndarray, new_shape) -> np.ndarray:
    """Bilinear resampling of an (H, W) or (H, W, C) image."""
    img = np.asarray(img, dtype=np.float64)
    Ht, Wt = int(new_shape[0]), int(new_shape[1])
    if Ht <= 0 or Wt <= 0:
        raise GeometryError(f"invalid target shape {new_shape}")
    if img.shape[:2] == (Ht, Wt):
        return img.copy()
    r0, r1, fr = _linear_axis(img.shape[0], Ht)
    c0, c1, fc = _linear_axis(img.shape[1], Wt)
    extra = (None,) * (img.ndim - 2)
    fr = fr[(slice(None), None) + extra]
    fc = fc[(slice(None),) + extra]
    rows = img[r0] * (1 - fr) + img[r1] * fr
    return rows[:, c0] * (1 - fc) + rows[:, c1] * fc


def resample_disparity(dmap: DisparityMap, new_shape) -> DisparityMap:
    """Nearest-neighbour regridding; values are NOT rescaled here.

    Use :func:`scale_disparity` with the width ratio afterwards.
    """
    Ht, Wt = int(new_shape[0]), int(new_shape[1])
    if Ht <= 0 or Wt <= 0:
        raise GeometryError(f"invalid target shape {new_shape}")
    ri = _nearest_axis(dmap.shape[0], Ht)
    ci = _nearest_axis(dmap.shape[1], Wt)
    return DisparityMap(dmap.values[np.ix_(ri, ci)], dmap.valid[np.ix_(ri, ci)],
                        dmap.resolution)


def scale_disparity(dmap: DisparityMap, factor: float) -> DisparityMap:
    if not factor > 0:
        raise GeometryError(f"scale factor must be positive, got {factor}")
    values = dmap.values.copy()
    values[dmap.valid] *= factor
    return DisparityMap(values, dmap.valid.copy(), dmap.resolution)


# -- stereo input construction ----------------------------------------------

def _tele_mode(tele: np.ndarray, geom: TeleWideGeometry) -> str:
    shape = tele.shape[:2]
    r = geom.rect
    if shape == (r.height, r.width):
        return "dataset"
    if shape == geom.wide_shape:
        return "device"
    raise GeometryError(
        f"tele shape {shape} matches neither the center rect "
        f"{(r.height, r.width)} nor the wide shape {geom.wide_shape}")


def _check_wide(wide: np.ndarray, geom: TeleWideGeometry):
    if wide.shape[:2] != geom.wide_shape:
        raise GeometryError(f"wide shape {wide.shape[:2]} != {geom.wide_shape}")


def make_wide_pair(wide, tele, geom: TeleWideGeometry):
    """Wide-FOV pair: tele brought to wide pitch and zero-padded.

    Returns ``(left, right, valid_rect)``.
    """
    wide = np.asarray(wide, dtype=np.float64)
    tele = np.asarray(tele, dtype=np.float64)
    _check_wide(wide, geom)
    mode = _tele_mode(tele, geom)
    r = geom.rect
    if mode == "device":
        tele = resample_image(tele, (r.height, r.width))
    right = np.zeros(geom.wide_shape + tele.shape[2:], dtype=np.float64)
    right[r.slices] = tele
    return wide.copy(), right, r


def make_tele_pair(wide, tele, geom: TeleWideGeometry):
    """Tele-FOV pair: wide cropped to the center rect and upsampled.

    In dataset mode the tele image is upsampled by the zoom so both views
    sit at tele-native resolution.  Returns ``(left, right)``.
    """
    wide = np.asarray(wide, dtype=np.float64)
    tele = np.asarray(tele, dtype=np.float64)
    _check_wide(wide, geom)
    mode = _tele_mode(tele, geom)
    if mode == "dataset":
        tele = resample_image(tele, geom.tele_shape)
    left = resample_image(wide[geom.rect.slices], tele.shape[:2])
    return left, tele.copy()


def tele_to_wide(dmap: DisparityMap, geom: TeleWideGeometry) -> DisparityMap:
    """Embed a tele-resolution disparity map into the wide frame.

    Values are rescaled to wide pixels; the surround is marked invalid.
    """
    r = geom.rect
    small = resample_disparity(dmap, (r.height, r.width))
    small = scale_disparity(small, r.width / dmap.shape[1])
    values = np.zeros(geom.wide_shape)
    valid = np.zeros(geom.wide_shape, dtype=bool)
    values[r.slices] = small.values
    valid[r.slices] = small.valid
    return DisparityMap(values, valid, "wide")
