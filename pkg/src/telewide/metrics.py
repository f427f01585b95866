"""KITTI-style disparity evaluation with a center / surround breakdown."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .types import DisparityMap, GeometryError, NoLabelsError, Rect

ABS_THRESH = 3.0
REL_THRESH = 0.05


def labeled(est: DisparityMap, gt: DisparityMap) -> np.ndarray:
    """Pixels that take part in evaluation: valid, positive ground truth
    and a valid estimate."""
    if est.shape != gt.shape:
        raise GeometryError(f"shape mismatch {est.shape} vs {gt.shape}")
    return gt.valid & (np.where(gt.valid, gt.values, 0.0) > 0) & est.valid


def _abs_err(est, gt, mask):
    return np.abs(est.values[mask] - gt.values[mask])


def outlier_mask(err: np.ndarray, gt_values: np.ndarray) -> np.ndarray:
    # correct iff err < 3 px or err < 5 % of the true disparity
    return (err >= ABS_THRESH) & (err >= REL_THRESH * gt_values)


def outlier_rate(est: DisparityMap, gt: DisparityMap, region: Optional[np.ndarray] = None) -> float:
    m = labeled(est, gt)
    if region is not None:
        m &= region
    n = int(m.sum())
    if n == 0:
        raise NoLabelsError("no labeled pixels")
    bad = outlier_mask(_abs_err(est, gt, m), gt.values[m])
    return 100.0 * bad.sum() / n


def end_point_error(est: DisparityMap, gt: DisparityMap, region: Optional[np.ndarray] = None) -> float:
    m = labeled(est, gt)
    if region is not None:
        m &= region
    n = int(m.sum())
    if n == 0:
        raise NoLabelsError("no labeled pixels")
    return float(_abs_err(est, gt, m).mean())


@dataclass
class RegionReport:
    metric: str
    error_all: Optional[float]
    error_cen: Optional[float]
    error_sur: Optional[float]
    n_all: int
    n_cen: int
    n_sur: int

    def to_csv(self) -> str:
        def f(v):
            return "" if v is None else f"{v:.6f}"
        return ",".join([self.metric, f(self.error_all), f(self.error_cen),
                         f(self.error_sur), str(self.n_all), str(self.n_cen), str(self.n_sur)])

    def table(self, name: str = "estimate") -> str:
        unit = "(%)" if self.metric == "outlier" else "(px)"

        def f(v):
            return "-" if v is None else f"{v:.2f}"
        head = f"{'Model name':<16} | error-all{unit} | error-cen{unit} | error-sur{unit}"
        row = (f"{name:<16} | {f(self.error_all):>{len('error-all') + len(unit)}} | "
               f"{f(self.error_cen):>{len('error-cen') + len(unit)}} | "
               f"{f(self.error_sur):>{len('error-sur') + len(unit)}}")
        return head + "\n" + row


CSV_HEADER = "metric,error_all,error_cen,error_sur,n_all,n_cen,n_sur"


def region_report(est: DisparityMap, gt: DisparityMap, rect: Rect, metric: str = "outlier") -> RegionReport:
    if not rect.fits(gt.shape):
        raise GeometryError(f"{rect} does not fit {gt.shape}")
    fn = {"outlier": outlier_rate, "epe": end_point_error}.get(metric)
    if fn is None:
        raise ValueError(f"unknown metric {metric!r}")
    lab = labeled(est, gt)
    inside = rect.mask(gt.shape)
    regions = [np.ones(gt.shape, dtype=bool), inside, ~inside]
    errs, counts = [], []
    for reg in regions:
        n = int((lab & reg).sum())
        counts.append(n)
        errs.append(fn(est, gt, reg) if n else None)
    return RegionReport(metric, *errs, *counts)
