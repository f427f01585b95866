"""Flat ``key=value`` pipeline configuration."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

from .bokeh import BokehParams
from .fgs import FgsParams
from .fusion import FusionConfig
from .geometry import TeleWideGeometry, center_rect
from .sgm import SgmParams
from .surround import SurroundSource


class ConfigError(ValueError):
    pass


@dataclass
class PipelineConfig:
    # geometry
    zoom: float = 2.0
    focal_px: float = 700.0
    baseline_m: float = 0.5
    # matching
    metric: str = "census"
    window: int = 5
    dmax: int = 64
    box_radius: int = 0
    # aggregation and readout
    p1: float = 10.0
    p2: float = 120.0
    paths: int = 8
    temperature: float = 1.0
    lr_check: bool = True
    lr_tol: float = 1.0
    # fusion
    rate_center: float = 0.20
    rate_surround: float = 0.12
    strip_width: int = 8
    fgs_lambda: float = 900.0
    fgs_sigma: float = 0.07
    fgs_iterations: int = 3
    # surround baseline
    surround_lambda: float = 400.0
    surround_sigma: float = 0.07
    surround_iterations: int = 3
    # bokeh
    r_max: float = 12.0
    d_range: Optional[float] = None
    kernel: str = "disc"
    clamp_negative: bool = True
    seed: int = 0

    def __post_init__(self):
        self.validate()

    def validate(self):
        try:
            center_rect((10, 10), self.zoom)
            if self.metric not in ("census", "sad"):
                raise ValueError(f"metric must be census or sad, got {self.metric!r}")
            if self.window < 1 or self.window % 2 == 0:
                raise ValueError("window must be odd")
            if self.metric == "census" and self.window < 3:
                raise ValueError("census window must be >= 3")
            if self.dmax < 1:
                raise ValueError("dmax must be >= 1")
            if self.box_radius < 0:
                raise ValueError("box_radius must be >= 0")
            if not self.temperature > 0:
                raise ValueError("temperature must be positive")
            if self.lr_tol < 0:
                raise ValueError("lr_tol must be non-negative")
            self.sgm, self.fusion, self.surround, self.bokeh
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def geometry(self, wide_shape) -> TeleWideGeometry:
        return TeleWideGeometry(self.zoom, tuple(wide_shape[:2]), self.focal_px, self.baseline_m)

    @property
    def sgm(self) -> SgmParams:
        return SgmParams(self.p1, self.p2, self.paths)

    @property
    def fgs(self) -> FgsParams:
        return FgsParams(self.fgs_lambda, self.fgs_sigma, self.fgs_iterations)

    @property
    def fusion(self) -> FusionConfig:
        return FusionConfig(self.rate_center, self.rate_surround, self.strip_width, self.fgs)

    @property
    def surround(self) -> SurroundSource:
        return SurroundSource("diffusion_baseline", self.surround_lambda,
                              self.surround_sigma, self.surround_iterations)

    @property
    def bokeh(self) -> BokehParams:
        return BokehParams(self.r_max, self.d_range, self.kernel, self.clamp_negative)

    # -- serialization ------------------------------------------------------

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                v = "auto"
            elif isinstance(v, bool):
                v = "true" if v else "false"
            lines.append(f"{f.name}={v}")
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def from_text(cls, text: str) -> "PipelineConfig":
        types = {f.name: f.type for f in fields(cls)}
        values = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
            key, val = (s.strip() for s in line.split("=", 1))
            if key not in types:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            values[key] = _convert(key, types[key], val)
        return cls(**values)

    @classmethod
    def load(cls, path) -> "PipelineConfig":
        return cls.from_text(Path(path).read_text())

    def replace(self, **changes) -> "PipelineConfig":
        return dataclasses.replace(self, **changes)


def _convert(key: str, typ: str, val: str):
    try:
        if typ == "bool":
            if val.lower() in ("true", "1", "yes", "on"):
                return True
            if val.lower() in ("false", "0", "no", "off"):
                return False
            raise ValueError(val)
        if typ == "int":
            return int(val)
        if typ == "float":
            return float(val)
        if typ == "Optional[float]":
            return None if val.lower() in ("auto", "none", "") else float(val)
        return val
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {val!r}") from exc
