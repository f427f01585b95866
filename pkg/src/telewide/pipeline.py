"""End-to-end estimation in the two tele-wide input geometries."""

from __future__ import annotations

import numpy as np

from .config import PipelineConfig
from .geometry import make_tele_pair, make_wide_pair, tele_to_wide
from .matching import box_aggregate, build_cost_volume, build_telewide_cost_volume
from .regression import soft_argmax, softmax_probs
from .sgm import fill_invalid, lr_consistency, sgm_aggregate, wta
from .types import CostVolume, DisparityMap, Rect


def aggregate(cv: CostVolume, cfg: PipelineConfig) -> CostVolume:
    if cfg.box_radius:
        cv = box_aggregate(cv, cfg.box_radius)
    return sgm_aggregate(cv, cfg.sgm)


def readout(agg: CostVolume, cfg: PipelineConfig, soft: bool = True) -> DisparityMap:
    """Soft-argmax over path-averaged costs, or a WTA readout."""
    if not soft:
        return wta(agg)
    pv = softmax_probs(agg.costs / cfg.paths, cfg.temperature)
    return soft_argmax(pv)


def right_disparity(left, right, dmax: int, cfg: PipelineConfig,
                    region: Rect | None = None) -> DisparityMap:
    """WTA disparity referenced to the right view, from its own aggregated
    volume (the mirrored pair turns right-to-left matching into the usual
    left-to-right search).  With ``region``, only pixels inside it are valid."""
    left = np.asarray(left, dtype=np.float64)
    right = np.asarray(right, dtype=np.float64)
    cv = build_cost_volume(right[:, ::-1], left[:, ::-1], dmax, cfg.metric, cfg.window)
    d = wta(aggregate(cv, cfg))
    out = DisparityMap(d.values[:, ::-1].copy(), d.valid[:, ::-1].copy(), d.resolution)
    if region is not None:
        out.valid &= region.mask(out.shape)
    return out


def refine(d: DisparityMap, d_right: DisparityMap, cfg: PipelineConfig,
           region: Rect | None = None) -> DisparityMap:
    """Left-right check, then row-wise fill of the rejected pixels.

    Left-view pixels whose match lies outside the right view (e.g. the left
    edge of the tele crop) fail the check and inherit the disparity of
    their row neighbours.  With ``region``, only pixels inside it are
    checked and only they serve as fill sources.
    """
    checked = lr_consistency(d, d_right, cfg.lr_tol)
    out = d.copy()
    sl = region.slices if region is not None else (slice(None), slice(None))
    sub = DisparityMap(checked.values[sl], checked.valid[sl])
    if not sub.valid.any():
        return out
    out.values[sl] = fill_invalid(sub).values
    out.valid[sl] = True
    return out


def stereo_disparity(left, right, cfg: PipelineConfig, dmax: int | None = None,
                     soft: bool = True) -> DisparityMap:
    """Plain rectified-pair matching (no tele-wide masking)."""
    left = np.asarray(left, dtype=np.float64)
    dmax = min(dmax or cfg.dmax, left.shape[1] - 1)
    cv = build_cost_volume(left, right, dmax, cfg.metric, cfg.window)
    return readout(aggregate(cv, cfg), cfg, soft)


def estimate_wide(wide, tele, cfg: PipelineConfig, soft: bool = True) -> DisparityMap:
    """Full wide-FOV estimate from the zero-padded pair.

    Only the tele region has matching evidence; the surround is filled in by
    path aggregation alone.  The returned map is dense.
    """
    wide = np.asarray(wide, dtype=np.float64)
    geom = cfg.geometry(wide.shape)
    left, right, rect = make_wide_pair(wide, tele, geom)
    dmax = min(cfg.dmax, wide.shape[1] - 1)
    cv = build_telewide_cost_volume(left, right, rect, dmax, cfg.metric, cfg.window)
    agg = aggregate(cv, cfg)
    d = readout(agg, cfg, soft)
    d.valid = np.ones(d.shape, dtype=bool)
    if cfg.lr_check:
        d = refine(d, right_disparity(left, right, dmax, cfg, rect), cfg, rect)
    d.resolution = "wide"
    return d


def estimate_tele(wide, tele, cfg: PipelineConfig, embed: bool = True,
                  soft: bool = True) -> DisparityMap:
    """Tele-FOV estimate on the cropped-and-upsampled pair.

    Disparities are found at tele resolution (search range scaled by the
    zoom).  With ``embed`` the result is brought back to wide pixels and
    placed in the wide frame, surround invalid.
    """
    wide = np.asarray(wide, dtype=np.float64)
    geom = cfg.geometry(wide.shape)
    left, right = make_tele_pair(wide, tele, geom)
    dmax = min(int(round(cfg.dmax * cfg.zoom)), left.shape[1] - 1)
    cv = build_cost_volume(left, right, dmax, cfg.metric, cfg.window)
    agg = aggregate(cv, cfg)
    d = readout(agg, cfg, soft)
    d.valid = np.ones(d.shape, dtype=bool)
    if cfg.lr_check:
        d = refine(d, right_disparity(left, right, dmax, cfg), cfg)
    d.resolution = "tele"
    return tele_to_wide(d, geom) if embed else d


def estimate(wide, tele, cfg: PipelineConfig, mode: str = "wide", **kw) -> DisparityMap:
    if mode == "wide":
        return estimate_wide(wide, tele, cfg, **kw)
    if mode == "tele":
        return estimate_tele(wide, tele, cfg, **kw)
    raise ValueError(f"mode must be 'tele' or 'wide', got {mode!r}")
