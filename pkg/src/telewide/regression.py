"""Classification-based disparity regression with analytic gradients.

Costs are turned into per-pixel probabilities with a temperature softmax,
the disparity is the expectation of the bin values, and training signal
comes from a Huber loss over labeled pixels.  Bins hold the integer
disparities 0 .. D-1 so that zero disparity is representable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .types import CostVolume, DisparityMap, NoLabelsError


@dataclass
class ProbVolume:
    probs: np.ndarray  # (D, H, W)

    @property
    def dmax(self) -> int:
        return self.probs.shape[0]

    @property
    def bin_values(self) -> np.ndarray:
        return np.arange(self.dmax, dtype=np.float64)


@dataclass(frozen=True)
class CameraModel:
    focal_px: float
    baseline_m: float

    def __post_init__(self):
        if self.focal_px <= 0 or self.baseline_m <= 0:
            raise ValueError("focal length and baseline must be positive")


@dataclass
class LossReport:
    value: float
    n_labeled: int
    grad: np.ndarray


def _costs(cv) -> np.ndarray:
    return cv.costs if isinstance(cv, CostVolume) else np.asarray(cv, dtype=np.float64)


def softmax_probs(cv, temperature: float = 1.0) -> ProbVolume:
    """p_j = exp(-c_j / t) / sum_k exp(-c_k / t) along axis 0."""
    if not temperature > 0:
        raise ValueError("temperature must be positive")
    z = -_costs(cv) / temperature
    z = z - z.max(axis=0, keepdims=True)
    e = np.exp(z)
    return ProbVolume(e / e.sum(axis=0, keepdims=True))


def soft_argmax(pv: ProbVolume) -> DisparityMap:
    vals = pv.bin_values.reshape((-1,) + (1,) * (pv.probs.ndim - 1))
    d = (pv.probs * vals).sum(axis=0)
    return DisparityMap(np.atleast_2d(d))


def huber(x, delta: float = 1.0):
    ax = np.abs(x)
    return np.where(ax <= delta, 0.5 * ax ** 2, delta * ax - 0.5 * delta ** 2)


def huber_grad(x, delta: float = 1.0):
    return np.clip(x, -delta, delta)


def huber_loss(pred: DisparityMap, gt: DisparityMap, delta: float = 1.0) -> LossReport:
    if pred.shape != gt.shape:
        raise ValueError(f"shape mismatch {pred.shape} vs {gt.shape}")
    if not delta > 0:
        raise ValueError("delta must be positive")
    lab = pred.valid & gt.valid
    n = int(lab.sum())
    if n == 0:
        raise NoLabelsError("no labeled pixels")
    x = np.where(lab, pred.values - np.where(lab, gt.values, 0.0), 0.0)
    value = float(huber(x[lab], delta).sum() / n)
    grad = np.where(lab, huber_grad(x, delta) / n, 0.0)
    return LossReport(value, n, grad)


def multitask_loss(l_smde: float, l_side: float, alpha: float = 1.0) -> float:
    """Stereo-matching loss plus alpha times the single-image loss."""
    if l_smde < 0 or l_side < 0:
        raise ValueError("losses must be non-negative")
    return l_smde + alpha * l_side


def soft_argmax_backward(pv: ProbVolume, d: np.ndarray, grad_d: np.ndarray,
                         temperature: float) -> np.ndarray:
    """dL/dc given dL/dd for d = sum_j v_j softmax(-c/t)_j.

    dd/dc_k = -(1/t) p_k (v_k - d).
    """
    vals = pv.bin_values.reshape((-1,) + (1,) * (pv.probs.ndim - 1))
    return -(pv.probs * (vals - d[None]) * grad_d[None]) / temperature


def regression_loss(costs: np.ndarray, gt: DisparityMap, temperature: float = 1.0,
                    delta: float = 1.0) -> tuple[float, np.ndarray]:
    """Huber loss of the soft-argmax readout and its gradient w.r.t. costs.

    A 1-D cost vector is treated as a single pixel.
    """
    costs = np.asarray(costs, dtype=np.float64)
    if costs.ndim == 1:
        value, grad = regression_loss(costs[:, None, None], gt, temperature, delta)
        return value, grad[:, 0, 0]
    pv = softmax_probs(costs, temperature)
    pred = soft_argmax(pv)
    rep = huber_loss(pred, gt, delta)
    grad = soft_argmax_backward(pv, pred.values, rep.grad, temperature)
    return rep.value, grad


def grad_check(costs, gt: DisparityMap, temperature: float = 1.0, step: float = 1e-4,
               delta: float = 1.0) -> float:
    """Max relative error of the analytic cost gradient against central
    finite differences, over entries with |analytic| > 1e-8."""
    if not 1e-6 <= step <= 1e-3:
        raise ValueError("step must lie in [1e-6, 1e-3]")
    costs = np.array(costs, dtype=np.float64)
    _, analytic = regression_loss(costs, gt, temperature, delta)
    numeric = np.empty_like(costs)
    for idx in np.ndindex(costs.shape):
        orig = costs[idx]
        costs[idx] = orig + step
        fp, _ = regression_loss(costs, gt, temperature, delta)
        costs[idx] = orig - step
        fm, _ = regression_loss(costs, gt, temperature, delta)
        costs[idx] = orig
        numeric[idx] = (fp - fm) / (2 * step)
    sel = np.abs(analytic) > 1e-8
    if not sel.any():
        return 0.0
    return float(np.max(np.abs(analytic[sel] - numeric[sel]) / np.abs(analytic[sel])))


def disparity_to_depth(d: DisparityMap, cam: CameraModel, eps: float = 1e-3):
    """z = F B / d; returns (depth, valid).  d <= eps is treated as infinity."""
    ok = d.valid & (d.values > eps)
    z = np.full(d.shape, np.inf)
    z[ok] = cam.focal_px * cam.baseline_m / d.values[ok]
    return z, ok


def depth_to_inverse_depth(z):
    return 1.0 / np.asarray(z, dtype=np.float64)


def inverse_depth_to_disparity(zeta, cam: CameraModel):
    return np.asarray(zeta, dtype=np.float64) * cam.focal_px * cam.baseline_m
