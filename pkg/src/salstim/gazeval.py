"""Fixation-data evaluation: density maps, saliency index, AOI reaction
times, center-bias distance and fixation-indexed temporal series.

Fixation coordinates are in pixels on the 1280 x 1080 canvas; times are in
milliseconds relative to stimulus onset.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from statistics import mean, stdev

import numpy as np

CANVAS_W = 1280
CANVAS_H = 1080
PX_PER_DEG = 40.0
CANVAS_CENTER = (CANVAS_W / 2.0, CANVAS_H / 2.0)
SIGMA_PX = 40.0
MIN_FIXATION_MS = 80.0
DWELL_MS = 1000.0
FREE_VIEWING_FAMILIES = (1, 2, 3, 4, 5)
INITIAL_PROXIMITY_DEG = 5.0

#: Distinguished saliency value when the density mass sits entirely inside
#: the mask (the background mean is zero, so the ratio is unbounded).
ALL_INSIDE = math.inf

FIXATION_COLUMNS = ("participant", "stimulus", "index", "x_px", "y_px", "onset_ms", "duration_ms")


@dataclass(frozen=True)
class FixationRecord:
    participant: str
    stimulus: str
    index: int
    x: float
    y: float
    onset: float
    duration: float


@dataclass(frozen=True)
class EvalResult:
    si: float | None
    rt_localization: float | None
    rt_identification: float | None
    rt_return: float | None
    dc_mean: float
    si_series: tuple[float, ...] = ()
    dc_series: tuple[float, ...] = ()
    flags: tuple[str, ...] = ()


class FixationParseError(ValueError):
    pass


def load_fixations(path) -> list[FixationRecord]:
    """Parse and validate a fixation CSV, sorted by (participant, stimulus, index).

    Raises FixationParseError with the offending line number on malformed
    rows, duplicate keys, short fixations or non-monotone onsets.
    """
    records = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            return []
        if tuple(h.strip() for h in header) != FIXATION_COLUMNS:
            raise FixationParseError(
                f"line 1: expected header {','.join(FIXATION_COLUMNS)}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(FIXATION_COLUMNS):
                raise FixationParseError(f"line {lineno}: expected {len(FIXATION_COLUMNS)} fields")
            try:
                rec = FixationRecord(
                    participant=row[0].strip(),
                    stimulus=row[1].strip(),
                    index=int(row[2]),
                    x=float(row[3]),
                    y=float(row[4]),
                    onset=float(row[5]),
                    duration=float(row[6]),
                )
            except ValueError as exc:
                raise FixationParseError(f"line {lineno}: {exc}") from None
            if rec.duration < MIN_FIXATION_MS:
                raise FixationParseError(
                    f"line {lineno}: fixation duration {rec.duration} below the "
                    f"{MIN_FIXATION_MS} ms detector floor"
                )
            records.append(rec)
    records.sort(key=lambda r: (r.participant, r.stimulus, r.index))
    seen = set()
    prev_key = None
    prev_onset = None
    for rec in records:
        key = (rec.participant, rec.stimulus, rec.index)
        if key in seen:
            raise FixationParseError(f"duplicate fixation key {key}")
        seen.add(key)
        path_key = key[:2]
        if path_key == prev_key and rec.onset <= prev_onset:
            raise FixationParseError(f"non-monotone onsets in scanpath {path_key}")
        prev_key, prev_onset = path_key, rec.onset
    return records


def write_fixations(records, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(FIXATION_COLUMNS)
        for r in records:
            writer.writerow(
                [r.participant, r.stimulus, r.index,
                 f"{r.x:.2f}", f"{r.y:.2f}", f"{r.onset:.1f}", f"{r.duration:.1f}"]
            )


def group_scanpaths(records) -> dict[tuple[str, str], list[FixationRecord]]:
    """Records grouped into (participant, stimulus) scanpaths, fixation order kept."""
    paths: dict[tuple[str, str], list[FixationRecord]] = {}
    for rec in sorted(records, key=lambda r: (r.participant, r.stimulus, r.index)):
        paths.setdefault((rec.participant, rec.stimulus), []).append(rec)
    return paths


_KERNEL_CACHE: dict[float, tuple[np.ndarray, int]] = {}


def _gaussian_kernel(sigma_px: float) -> tuple[np.ndarray, int]:
    """Normalized 2-D Gaussian stamp truncated to the 6-sigma window."""
    if sigma_px not in _KERNEL_CACHE:
        radius = int(3.0 * sigma_px + 0.5)
        xs = np.arange(-radius, radius + 1, dtype=float)
        k1 = np.exp(-0.5 * (xs / sigma_px) ** 2)
        k1 /= k1.sum()
        _KERNEL_CACHE[sigma_px] = (np.outer(k1, k1), radius)
    return _KERNEL_CACHE[sigma_px]


def _fixation_pixels(fixations) -> list[tuple[int, int]]:
    """Unique on-canvas pixel coordinates, insertion-ordered.

    Coincident fixations collapse to one pixel: the underlying fixation map
    is binary.
    """
    seen = set()
    out = []
    for f in fixations:
        ix, iy = int(f.x), int(f.y)
        if 0 <= ix < CANVAS_W and 0 <= iy < CANVAS_H and (ix, iy) not in seen:
            seen.add((ix, iy))
            out.append((ix, iy))
    return out


def _stamp_slices(ix: int, iy: int, radius: int):
    x0, x1 = max(0, ix - radius), min(CANVAS_W, ix + radius + 1)
    y0, y1 = max(0, iy - radius), min(CANVAS_H, iy + radius + 1)
    kx0, ky0 = x0 - (ix - radius), y0 - (iy - radius)
    return (slice(y0, y1), slice(x0, x1)), (slice(ky0, ky0 + y1 - y0), slice(kx0, kx0 + x1 - x0))


def density_map(fixations, sigma_px: float = SIGMA_PX) -> np.ndarray:
    """Binary fixation map blurred with a truncated symmetric Gaussian and
    renormalized to sum 1.  Off-canvas fixations are ignored; zero usable
    fixations raise ValueError."""
    pixels = _fixation_pixels(fixations)
    if not pixels:
        raise ValueError("no on-canvas fixations to build a density map from")
    kernel, radius = _gaussian_kernel(sigma_px)
    dmap = np.zeros((CANVAS_H, CANVAS_W))
    for ix, iy in pixels:
        dst, src = _stamp_slices(ix, iy, radius)
        dmap[dst] += kernel[src]
    dmap /= dmap.sum()
    return dmap


def saliency_index(dmap: np.ndarray, mask: np.ndarray) -> float:
    """Relative density energy inside the mask: (S_t - S_b) / S_b, where the
    two terms are per-pixel means inside and outside.

    Returns the ALL_INSIDE marker when no mass lies outside the mask.
    """
    mask = np.asarray(mask, dtype=bool)
    n_in = int(mask.sum())
    n_out = mask.size - n_in
    if n_in == 0 or n_out == 0:
        raise ValueError("mask must have at least one pixel inside and one outside")
    s_t = float(dmap[mask].sum()) / n_in
    s_b = float(dmap[~mask].sum()) / n_out
    if s_b == 0.0:
        return ALL_INSIDE
    return (s_t - s_b) / s_b


class _RunningSaliency:
    """Incremental saliency of a growing binary fixation map.

    Adds one truncated Gaussian stamp per new fixation pixel and tracks the
    in-mask and total mass; normalization cancels out of the index.
    """

    def __init__(self, mask: np.ndarray, sigma_px: float = SIGMA_PX):
        self.mask = np.asarray(mask, dtype=float)
        self.n_in = int(mask.sum())
        self.n_out = mask.size - self.n_in
        self.kernel, self.radius = _gaussian_kernel(sigma_px)
        self.seen: set[tuple[int, int]] = set()
        self.inside = 0.0
        self.total = 0.0

    def add(self, x: float, y: float) -> None:
        ix, iy = int(x), int(y)
        if not (0 <= ix < CANVAS_W and 0 <= iy < CANVAS_H) or (ix, iy) in self.seen:
            return
        self.seen.add((ix, iy))
        dst, src = _stamp_slices(ix, iy, self.radius)
        stamp = self.kernel[src]
        self.total += float(stamp.sum())
        self.inside += float((stamp * self.mask[dst]).sum())

    def value(self) -> float | None:
        if self.total == 0.0 or self.n_in == 0 or self.n_out == 0:
            return None
        s_t = self.inside / self.n_in
        s_b = (self.total - self.inside) / self.n_out
        if s_b == 0.0:
            return ALL_INSIDE
        return (s_t - s_b) / s_b


def _inside(mask: np.ndarray, x: float, y: float) -> bool:
    ix, iy = int(x), int(y)
    return 0 <= ix < CANVAS_W and 0 <= iy < CANVAS_H and bool(mask[iy, ix])


def mask_centroid(mask: np.ndarray) -> tuple[float, float]:
    ys, xs = np.nonzero(mask)
    if len(xs) == 0:
        raise ValueError("empty mask has no centroid")
    return float(xs.mean()), float(ys.mean())


def rt_localization(scanpath, mask: np.ndarray, family: int) -> tuple[float | None, bool]:
    """Onset of the first in-mask fixation, plus an exclusion flag.

    For the free-viewing families the sample is flagged when the initial
    fixation already lies within 5 degrees of the AOI center, where the
    landing time says more about the starting point than about saliency.
    """
    if not np.any(mask):
        return None, False
    excluded = False
    if family in FREE_VIEWING_FAMILIES and scanpath:
        cx, cy = mask_centroid(mask)
        first = scanpath[0]
        d_deg = math.hypot(first.x - cx, first.y - cy) / PX_PER_DEG
        excluded = d_deg < INITIAL_PROXIMITY_DEG
    for f in scanpath:
        if _inside(mask, f.x, f.y):
            return f.onset, excluded
    return None, excluded


def rt_identification(scanpath, mask: np.ndarray, dwell_ms: float = DWELL_MS) -> float | None:
    """Onset of the first run of consecutive in-mask fixations whose summed
    duration reaches the dwell threshold."""
    if not np.any(mask):
        return None
    run_start = None
    run_total = 0.0
    for f in scanpath:
        if _inside(mask, f.x, f.y):
            if run_start is None:
                run_start = f.onset
                run_total = 0.0
            run_total += f.duration
            if run_total >= dwell_ms:
                return run_start
        else:
            run_start = None
    return None


def rt_return(scanpath, mask: np.ndarray) -> float | None:
    """Time from the first in-mask fixation to the next one that re-enters
    the mask after at least one fixation outside."""
    first_in = None
    left = False
    for f in scanpath:
        inside = _inside(mask, f.x, f.y)
        if first_in is None:
            if inside:
                first_in = f.onset
        elif not inside:
            left = True
        elif left:
            return f.onset - first_in
    return None


def distance_from_center(fixations, baseline_center=CANVAS_CENTER):
    """Per-fixation Euclidean distance to the baseline center, in degrees."""
    distances = [
        math.hypot(f.x - baseline_center[0], f.y - baseline_center[1]) / PX_PER_DEG
        for f in fixations
    ]
    return distances, (mean(distances) if distances else float("nan"))


def evaluate_scanpath(
    scanpath,
    mask: np.ndarray,
    family: int,
    dwell_ms: float = DWELL_MS,
    baseline_center=CANVAS_CENTER,
    sigma_px: float = SIGMA_PX,
) -> EvalResult:
    """All per-scanpath measures for one (participant, stimulus) pair."""
    flags = []
    has_aoi = bool(np.any(mask))
    if not has_aoi:
        flags.append("target-absent")
    rt_loc, excluded = rt_localization(scanpath, mask, family)
    if excluded:
        flags.append("excluded-initial-proximity")
    rt_id = rt_identification(scanpath, mask, dwell_ms)
    rt_ret = rt_return(scanpath, mask)
    dc_series, dc_mean = distance_from_center(scanpath, baseline_center)
    si = None
    si_series: list[float] = []
    if has_aoi:
        running = _RunningSaliency(mask, sigma_px)
        for f in scanpath:
            running.add(f.x, f.y)
            value = running.value()
            si_series.append(value if value is not None else math.nan)
        si = running.value()
        if si is None:
            flags.append("no-fixations")
        elif si == ALL_INSIDE:
            flags.append("si-all-inside")
    return EvalResult(
        si=si,
        rt_localization=rt_loc,
        rt_identification=rt_id,
        rt_return=rt_ret,
        dc_mean=dc_mean,
        si_series=tuple(si_series),
        dc_series=tuple(dc_series),
        flags=tuple(flags),
    )


def temporal_series(
    scanpaths: dict[tuple[str, str], list[FixationRecord]],
    masks,
    baseline_center=CANVAS_CENTER,
    sigma_px: float = SIGMA_PX,
    pool_global: bool = False,
):
    """Fixation-index-resolved SI, fixation duration, saccade amplitude and
    center distance.

    The per-index saliency is computed per stimulus from the pooled k-th
    fixations of all participants and then averaged across stimuli; with
    pool_global=True a single pooled k-th fixation map is scored against
    every stimulus mask instead.  ``masks`` maps stimulus ids to boolean
    arrays, either a dict or a callable returning None for unknown ids;
    masks are requested one stimulus at a time so callers can stream them
    from disk.
    """
    get_mask = masks.get if isinstance(masks, dict) else masks
    by_index: dict[int, list[FixationRecord]] = {}
    by_stim_index: dict[str, dict[int, list[FixationRecord]]] = {}
    sa_by_index: dict[int, list[float]] = {}
    for (participant, stimulus), path in scanpaths.items():
        prev = None
        for k, f in enumerate(path, start=1):
            by_index.setdefault(k, []).append(f)
            by_stim_index.setdefault(stimulus, {}).setdefault(k, []).append(f)
            if prev is not None:
                sa = math.hypot(f.x - prev.x, f.y - prev.y) / PX_PER_DEG
                sa_by_index.setdefault(k, []).append(sa)
            prev = f
    if not by_index:
        return []
    si_values: dict[int, list[float]] = {k: [] for k in by_index}
    for stimulus, per_index in sorted(by_stim_index.items()):
        mask = get_mask(stimulus)
        if mask is None or not np.any(mask):
            continue
        for k in sorted(by_index):
            pool = by_index[k] if pool_global else per_index.get(k, [])
            if not pool:
                continue
            running = _RunningSaliency(mask, sigma_px)
            for f in pool:
                running.add(f.x, f.y)
            value = running.value()
            if value is not None and math.isfinite(value):
                si_values[k].append(value)
    rows = []
    for k in sorted(by_index):
        fixations = by_index[k]
        dc, _ = distance_from_center(fixations, baseline_center)
        sa = sa_by_index.get(k, [])
        rows.append(
            {
                "index": k,
                "n_fixations": len(fixations),
                "si_mean": mean(si_values[k]) if si_values[k] else None,
                "fd_mean": mean(f.duration for f in fixations),
                "sa_mean": mean(sa) if sa else None,
                "dc_mean": mean(dc),
            }
        )
    return rows


def rt_outlier_threshold(rts) -> float | None:
    """mean + 2 * sample stdev of the set, or None below 3 samples."""
    rts = list(rts)
    if len(rts) < 3:
        return None
    return mean(rts) + 2.0 * stdev(rts)


def filter_rt_outliers(rts):
    """Single-pass outlier rule: drop samples above mean + 2 * sample stdev.

    Fewer than 3 samples pass through untouched.  The pass is not idempotent
    by design; re-filtering a filtered set may drop more samples.
    """
    rts = list(rts)
    threshold = rt_outlier_threshold(rts)
    if threshold is None:
        return rts
    return [rt for rt in rts if rt <= threshold]
