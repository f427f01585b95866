"""Shared data carriers: rectangles, disparity maps and cost volumes.

Images are plain float64 numpy arrays of shape (H, W) or (H, W, C) with
nominal range [0, 1]; they are not wrapped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np


class GeometryError(ValueError):
    """Invalid zoom, rectangle or mismatched input shapes."""


class NoLabelsError(ValueError):
    """An evaluation or loss was requested over zero labeled pixels."""


@dataclass(frozen=True)
class Rect:
    row0: int
    col0: int
    height: int
    width: int

    def __post_init__(self):
        if min(self.row0, self.col0, self.height, self.width) < 0:
            raise GeometryError(f"negative rect field: {self}")

    @property
    def area(self) -> int:
        return self.height * self.width

    @property
    def slices(self) -> tuple[slice, slice]:
        return (slice(self.row0, self.row0 + self.height),
                slice(self.col0, self.col0 + self.width))

    def fits(self, shape) -> bool:
        return (self.row0 + self.height <= shape[0]
                and self.col0 + self.width <= shape[1])

    def mask(self, shape) -> np.ndarray:
        m = np.zeros(shape[:2], dtype=bool)
        m[self.slices] = True
        return m


@dataclass
class DisparityMap:
    """Disparity values in pixels plus an explicit validity mask.

    ``resolution`` records the pixel pitch the values are expressed in
    ("wide" or "tele").
    """

    values: np.ndarray
    valid: np.ndarray = None
    resolution: str = "wide"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise GeometryError("disparity map must be 2-D")
        if self.valid is None:
            self.valid = np.isfinite(self.values)
        else:
            self.valid = np.asarray(self.valid, dtype=bool)
            if self.valid.shape != self.values.shape:
                raise GeometryError("mask shape differs from values shape")

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def copy(self) -> "DisparityMap":
        return DisparityMap(self.values.copy(), self.valid.copy(), self.resolution)

    @classmethod
    def full(cls, shape, value: float, resolution: str = "wide") -> "DisparityMap":
        return cls(np.full(shape, float(value)), np.ones(shape, bool), resolution)


@dataclass
class CostVolume:
    """D x H x W matching costs, lower is better.

    Bin ``k`` holds the cost of integer disparity ``k`` (0 .. D-1).
    ``support[k, y, x]`` is False where the match for disparity k fell
    outside the image or the valid right-image region; those entries hold
    ``sentinel``.
    """

    costs: np.ndarray
    valid: np.ndarray
    sentinel: float
    support: Optional[np.ndarray] = field(default=None)

    @property
    def dmax(self) -> int:
        return self.costs.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.costs.shape[1:]

    def replace(self, costs: np.ndarray) -> "CostVolume":
        return CostVolume(costs, self.valid.copy(), self.sentinel,
                          None if self.support is None else self.support.copy())
