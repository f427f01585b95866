"""Full-FOV disparity outside the tele region.

The stereo pair carries no information in the surround, so a dense map
for it has to come from elsewhere: either an externally computed map
(e.g. a single-image depth network's output), or the built-in baseline
that extends the center by nearest-border replication followed by
guided global smoothing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fgs import FgsParams, fgs_smooth
from .geometry import TeleWideGeometry
from .types import DisparityMap, GeometryError


@dataclass(frozen=True)
class SurroundSource:
    kind: str = "diffusion_baseline"
    lam: float = 400.0
    sigma: float = 0.07
    iterations: int = 3
    path: str | None = None

    def __post_init__(self):
        if self.kind not in ("external_map", "diffusion_baseline"):
            raise ValueError(f"unknown surround source {self.kind!r}")
        if self.kind == "external_map" and not self.path:
            raise ValueError("external_map source needs a path")

    @property
    def fgs(self) -> FgsParams:
        return FgsParams(self.lam, self.sigma, self.iterations)


def nearest_border_fill(center: np.ndarray, geom: TeleWideGeometry) -> np.ndarray:
    """Give each wide-frame pixel the value of the closest center-rect pixel.

    The Euclidean-nearest point of an axis-aligned rectangle is obtained by
    clamping each coordinate independently.
    """
    r = geom.rect
    H, W = geom.wide_shape
    rows = np.clip(np.arange(H), r.row0, r.row0 + r.height - 1)
    cols = np.clip(np.arange(W), r.col0, r.col0 + r.width - 1)
    return center[np.ix_(rows, cols)]


def extrapolate_surround(center_disp: DisparityMap, wide_rgb: np.ndarray,
                         geom: TeleWideGeometry,
                         params: SurroundSource = SurroundSource()) -> DisparityMap:
    r = geom.rect
    if r.area == 0:
        raise GeometryError("empty center region")
    if center_disp.shape != geom.wide_shape:
        raise GeometryError(f"center map {center_disp.shape} != wide {geom.wide_shape}")
    if not center_disp.valid[r.slices].all():
        raise ValueError("center disparity must be valid on the whole tele region")
    init = nearest_border_fill(center_disp.values, geom)
    # the smoother only couples surround pixels, so the fill stays within the
    # range of the rect border values
    smoothed = fgs_smooth(init, np.asarray(wide_rgb, dtype=np.float64), params.fgs,
                          mask=~r.mask(geom.wide_shape))
    smoothed[r.slices] = center_disp.values[r.slices]
    return DisparityMap(smoothed, np.ones(geom.wide_shape, dtype=bool), "wide")


def load_external_surround(path, expected_shape) -> DisparityMap:
    from .io import load_disparity

    dmap = load_disparity(path)
    if dmap.shape != tuple(expected_shape):
        raise GeometryError(f"external map {dmap.shape} != expected {tuple(expected_shape)}")
    return dmap
