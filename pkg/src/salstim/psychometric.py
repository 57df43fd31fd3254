"""Scalar contrast mathematics: uniform contrast ladders, orientation series,
and the saturation/lightness contrast geometry used by the stimulus builders.

Every function here is pure and safe to call from parallel workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

N_LEVELS = 7

# Angle of the background-target axis in the saturation/lightness plane,
# fitted so that the maximum distractor-target angle is 53 degrees and
# tan(alpha) * tan(53) == 1 (full-range saturation contrast at the top level).
COLOR_CONTRAST_ALPHA_DEG = 37.0

HSL = tuple[float, float, float]


@dataclass(frozen=True)
class ContrastSeries:
    """An ordered ladder of contrast values, one per contrast index."""

    n: int
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != self.n:
            raise ValueError(f"expected {self.n} values, got {len(self.values)}")
        if any(b < a - 1e-12 for a, b in zip(self.values, self.values[1:])):
            raise ValueError("contrast series must be non-decreasing")

    def __getitem__(self, index: int) -> float:
        """Value at 1-based contrast index."""
        if not 1 <= index <= self.n:
            raise IndexError(f"contrast index {index} out of range 1..{self.n}")
        return self.values[index - 1]

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True)
class ColorGeometry:
    """Saturation-contrast triangle for one contrast index.

    ``alpha`` is the background-target angle, ``theta`` the distractor-target
    angle and ``beta`` the remainder; the three always sum to 90 degrees.
    """

    alpha: float
    theta: float
    beta: float
    deltaS_DT: float
    S_D: float
    background: HSL
    target: HSL


@dataclass(frozen=True)
class LightnessContrast:
    deltaL_DT: float
    L_D: float


def psi(x: int, n: int = N_LEVELS) -> float:
    """Uniform contrast fraction (x - 1) / (n - 1) for index x in 1..n."""
    if n < 2:
        raise ValueError(f"need at least 2 contrast levels, got {n}")
    if not 1 <= x <= n:
        raise ValueError(f"contrast index {x} out of range 1..{n}")
    return (x - 1) / (n - 1)


def psi_scaled(x: int, n: int, v: float) -> float:
    """Contrast fraction rescaled to peak value v."""
    if not math.isfinite(v):
        raise ValueError("scale must be finite")
    return v * psi(x, n)


def psi_range(n: int, lo: float, hi: float, baseline: float | None = None) -> ContrastSeries:
    """Seven-value ladder spanning [lo, hi] through a shared baseline.

    The ladder is built from two four-point uniform ramps, lo -> baseline and
    baseline -> hi, joined at the baseline.  The default baseline is the
    midpoint, which degenerates to a single uniform ramp.
    """
    if n != N_LEVELS:
        raise ValueError(f"ranged ladder is defined for n={N_LEVELS}, got {n}")
    if baseline is None:
        baseline = (lo + hi) / 2
    if not lo <= baseline <= hi:
        raise ValueError(f"need lo <= baseline <= hi, got {lo}, {baseline}, {hi}")
    lower = [lo + (baseline - lo) * psi(k, 4) for k in range(1, 5)]
    upper = [baseline + (hi - baseline) * psi(k, 4) for k in range(1, 5)]
    return ContrastSeries(n, tuple(lower + upper[1:]))


def phi_series(v: float, a: float) -> ContrastSeries:
    """Orientation ladder |arcsin(psi(x) * v) + a| in degrees, x = 1..7.

    The arcsine spacing compresses steps near the baseline orientation and
    widens them toward the orthogonal one.
    """
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"scale {v} leaves the arcsine domain [0, 1]")
    values = tuple(
        abs(math.degrees(math.asin(psi_scaled(x, N_LEVELS, v))) + a)
        for x in range(1, N_LEVELS + 1)
    )
    return ContrastSeries(N_LEVELS, values)


def delta_phi(phi: float, b: float) -> float:
    """Orientation contrast between two bar angles, in [0, 90].

    Bars are symmetric under 180-degree rotation, so the contrast is the
    smaller of the two quadrant differences.
    """
    d = abs(b - phi) % 180.0
    return min(d, 180.0 - d)


def pattern_angle(u: float, row: int, col: int) -> float:
    """Accumulative-slope orientation u*row + u*col, wrapped to [0, 180)."""
    if row < 0 or col < 0:
        raise ValueError("grid indices must be non-negative")
    return (u * row + u * col) % 180.0


def wrap_orientation(angle: float) -> float:
    """Canonical bar orientation in [0, 180)."""
    return angle % 180.0


def color_geometry(
    background: HSL,
    target: HSL,
    x: int,
    alpha_deg: float = COLOR_CONTRAST_ALPHA_DEG,
) -> ColorGeometry:
    """Distractor saturation geometry for contrast index x.

    The contrast triangle lives in the saturation/lightness plane with its
    vertex on the achromatic axis: the target sits at full span from the
    vertex, the distractor-target angle theta grows as (90 - alpha) * psi(x)
    and the saturation difference follows

        deltaS_DT = S_T * tan(alpha) * tan(theta)

    which reaches exactly S_T at the top index since alpha + theta_max = 90.
    The actual background color only selects which side of the saturation
    axis the distractors fall on.
    """
    if background == target:
        raise ValueError("background equals target; contrast geometry is degenerate")
    s_bg, s_tgt = background[1], target[1]
    theta = (90.0 - alpha_deg) * psi(x, N_LEVELS)
    beta = 90.0 - theta - alpha_deg
    span = s_tgt * math.tan(math.radians(alpha_deg))
    delta_s = span * math.tan(math.radians(theta))
    delta_s = min(max(delta_s, 0.0), 1.0)
    anchor = s_tgt if s_tgt > s_bg else s_bg
    s_d = min(max(anchor - delta_s, 0.0), 1.0)
    return ColorGeometry(alpha_deg, theta, beta, delta_s, s_d, background, target)


def lightness_contrast(l_bg: float, l_tgt: float, x: int) -> LightnessContrast:
    """Distractor lightness for contrast index x.

    The branch depends on whether the target is lighter than the background;
    in both branches the distractors sweep the background-target lightness
    interval as x runs over the ladder.
    """
    if not (0.0 <= l_bg <= 1.0 and 0.0 <= l_tgt <= 1.0):
        raise ValueError("lightness values must lie in [0, 1]")
    fraction = psi(x, N_LEVELS)
    span = abs(l_bg - l_tgt)
    if l_tgt > l_bg:
        delta_l = span * (1.0 - fraction)
        l_d = l_tgt - delta_l
    else:
        delta_l = span * fraction
        l_d = l_bg - delta_l
    return LightnessContrast(delta_l, l_d)
