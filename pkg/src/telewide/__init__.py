"""Tele-wide stereo matching: dense full-FOV disparity from a wide image
and a tele image covering its center."""

from .config import PipelineConfig
from .geometry import (TeleWideGeometry, center_rect, make_tele_pair, make_wide_pair,
                       resample_disparity, resample_image, scale_disparity, tele_to_wide)
from .pipeline import estimate, estimate_tele, estimate_wide, stereo_disparity
from .types import CostVolume, DisparityMap, GeometryError, NoLabelsError, Rect

__all__ = [
    "CostVolume", "DisparityMap", "GeometryError", "NoLabelsError", "PipelineConfig",
    "Rect", "TeleWideGeometry", "center_rect", "estimate", "estimate_tele",
    "estimate_wide", "make_tele_pair", "make_wide_pair", "resample_disparity",
    "resample_image", "scale_disparity", "stereo_disparity", "tele_to_wide",
]
