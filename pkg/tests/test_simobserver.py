import numpy as np
import pytest

from salstim import gazeval as gz
from salstim import raster
from salstim import scenegen as sg
from salstim import simobserver as so


@pytest.fixture(scope="module")
def layout():
    return sg.build_orientation(7, seed=5)


@pytest.fixture(scope="module")
def mask(layout):
    return raster.render_mask(layout)


def to_records(fixations, participant="p1", stimulus="s1"):
    return [
        gz.FixationRecord(participant, stimulus, f.index, f.x, f.y, f.onset, f.duration)
        for f in fixations
    ]


def test_deterministic_per_seed(layout):
    params = so.ObserverParams(aoi_bias=0.5, seed=9)
    assert so.simulate(layout, params) == so.simulate(layout, params)
    other = so.ObserverParams(aoi_bias=0.5, seed=10)
    assert so.simulate(layout, params) != so.simulate(layout, other)


def test_full_bias_lands_inside_mask(layout, mask):
    params = so.ObserverParams(aoi_bias=1.0, n_fixations=20, seed=3)
    fixations = so.simulate(layout, params)
    for f in fixations:
        assert mask[int(f.y), int(f.x)]
    running = gz._RunningSaliency(mask)
    for f in fixations:
        running.add(f.x, f.y)
    assert running.value() is gz.ALL_INSIDE or running.value() > 0


def test_zero_bias_small_sigma_stays_centered(layout):
    params = so.ObserverParams(aoi_bias=0.0, center_sigma=1e-9, n_fixations=8, seed=4)
    fixations = so.simulate(layout, params)
    _, dc_mean = gz.distance_from_center(to_records(fixations))
    assert dc_mean == pytest.approx(0.0, abs=1e-6)


def test_duration_distribution_median(layout):
    params = so.ObserverParams(aoi_bias=0.0, n_fixations=10000, fd_median=200.0, seed=8)
    fixations = so.simulate(layout, params)
    durations = np.array([f.duration for f in fixations])
    assert abs(np.median(durations) / 200.0 - 1.0) < 0.05
    assert durations.min() >= so.MIN_FIXATION_MS


def test_onsets_cumulative_with_saccade_gap(layout):
    params = so.ObserverParams(aoi_bias=0.3, n_fixations=5, seed=2)
    fixations = so.simulate(layout, params)
    assert fixations[0].onset == 0.0
    for a, b in zip(fixations, fixations[1:]):
        assert b.onset == pytest.approx(a.onset + a.duration + so.SACCADE_GAP_MS)


def test_empty_aoi_requires_zero_bias():
    absent = sg.build_feature_conjunction(3, "feature", present=False, seed=1)
    with pytest.raises(ValueError):
        so.simulate(absent, so.ObserverParams(aoi_bias=0.2, seed=1))
    fixations = so.simulate(absent, so.ObserverParams(aoi_bias=0.0, seed=1))
    assert len(fixations) == 12


def test_params_validation():
    with pytest.raises(ValueError):
        so.ObserverParams(aoi_bias=1.5)
    with pytest.raises(ValueError):
        so.ObserverParams(n_fixations=0)


def test_localization_matches_first_in_mask_onset(layout, mask):
    params = so.ObserverParams(aoi_bias=0.5, n_fixations=15, seed=21)
    fixations = so.simulate(layout, params)
    records = to_records(fixations)
    rt, _ = gz.rt_localization(records, mask, family=layout.family)
    first_inside = next(
        (f.onset for f in records if mask[int(f.y), int(f.x)]), None
    )
    assert rt == first_inside


def test_return_times_have_plausible_magnitude(layout, mask):
    # observers that bounce in and out of the AOI re-enter on a
    # fixation-duration timescale, i.e. within a few seconds
    returns = []
    for seed in range(30):
        params = so.ObserverParams(aoi_bias=0.5, n_fixations=15, seed=seed)
        records = to_records(so.simulate(layout, params))
        rt = gz.rt_return(records, mask)
        if rt is not None:
            returns.append(rt)
    assert len(returns) >= 10
    assert 100.0 < np.mean(returns) < 10000.0


def test_mean_si_monotone_in_bias(layout, mask):
    means = []
    for bias in (0.0, 0.5, 1.0):
        values = []
        for seed in range(12):
            fixations = so.simulate(layout, so.ObserverParams(aoi_bias=bias, seed=seed))
            running = gz._RunningSaliency(mask)
            for f in fixations:
                running.add(f.x, f.y)
            v = running.value()
            if v is not None and np.isfinite(v):
                values.append(v)
        means.append(np.mean(values))
    assert means[0] <= means[1] <= means[2]
