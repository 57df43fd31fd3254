"""Synthetic scanpath generation for end-to-end pipeline testing.

Fixation positions are a mixture of AOI-attracted and center-biased draws;
durations are log-normal around a configurable median.  No claim of human
micro-structure realism beyond that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scenegen import SceneLayout

CANVAS_W = 1280
CANVAS_H = 1080
PX_PER_DEG = 40.0
SACCADE_GAP_MS = 30.0
MIN_FIXATION_MS = 80.0


@dataclass(frozen=True)
class ObserverParams:
    n_fixations: int = 12
    aoi_bias: float = 0.5
    center_sigma: float = 8.0  # degrees
    fd_median: float = 200.0  # ms
    fd_dispersion: float = 0.6  # log-scale
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.aoi_bias <= 1.0:
            raise ValueError("aoi_bias must lie in [0, 1]")
        if self.n_fixations < 1:
            raise ValueError("need at least one fixation")


@dataclass(frozen=True)
class SimFixation:
    index: int
    x: float
    y: float
    onset: float
    duration: float


def _sample_in_region(rng, region) -> tuple[float, float]:
    x0, y0, x1, y1 = region.bounding_box()
    for _ in range(10000):
        x = float(rng.uniform(x0, x1))
        y = float(rng.uniform(y0, y1))
        if region.contains(x, y):
            px = CANVAS_W / 2 + PX_PER_DEG * x
            py = CANVAS_H / 2 - PX_PER_DEG * y
            return px, py
    raise RuntimeError("AOI rejection sampling did not converge")


def simulate(layout: SceneLayout, params: ObserverParams) -> list[SimFixation]:
    """One synthetic scanpath over a scene; deterministic per seed."""
    if layout.aoi.is_empty and params.aoi_bias > 0:
        raise ValueError("aoi_bias > 0 requires a non-empty AOI")
    rng = np.random.default_rng(params.seed)
    fixations = []
    t = 0.0
    for k in range(1, params.n_fixations + 1):
        if params.aoi_bias > 0 and rng.uniform() < params.aoi_bias:
            x, y = _sample_in_region(rng, layout.aoi)
        else:
            x = CANVAS_W / 2 + PX_PER_DEG * params.center_sigma * rng.standard_normal()
            y = CANVAS_H / 2 + PX_PER_DEG * params.center_sigma * rng.standard_normal()
            x = min(max(x, 0.0), CANVAS_W - 1.0)
            y = min(max(y, 0.0), CANVAS_H - 1.0)
        duration = params.fd_median * math.exp(params.fd_dispersion * rng.standard_normal())
        duration = max(duration, MIN_FIXATION_MS)
        fixations.append(SimFixation(k, float(x), float(y), t, duration))
        t += duration + SACCADE_GAP_MS
    return fixations
