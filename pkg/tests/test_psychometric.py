import math

import pytest

from salstim import psychometric as psy

PUBLISHED_ORIENTATION_SET = [0, 10, 20, 30, 42, 56, 90]
PUBLISHED_SIZE_SERIES = [1.25, 1.67, 2.08, 2.5, 3.33, 4.17, 5.0]
PUBLISHED_THETA = [0.0, 9.0, 18.0, 35.0, 44.0, 53.0]
PUBLISHED_DELTA_S = [0.0, 0.121, 0.246, 0.528, 0.728, 1.0]


def test_psi_anchor_values():
    assert psy.psi(1, 7) == 0.0
    assert psy.psi(4, 7) == 0.5
    assert psy.psi(7, 7) == 1.0
    assert psy.psi(2, 7) == pytest.approx(1 / 6)


def test_psi_symmetry():
    for n in (2, 4, 7, 9):
        for x in range(1, n + 1):
            assert psy.psi(x, n) + psy.psi(n + 1 - x, n) == pytest.approx(1.0)


def test_psi_rejects_bad_index():
    with pytest.raises(ValueError):
        psy.psi(0, 7)
    with pytest.raises(ValueError):
        psy.psi(8, 7)
    with pytest.raises(ValueError):
        psy.psi(1, 1)


def test_psi_scaled():
    assert psy.psi_scaled(7, 7, 2.5) == 2.5
    assert psy.psi_scaled(4, 7, 90.0) == 45.0
    assert psy.psi_scaled(3, 7, 2.5) == pytest.approx(0.8333, abs=1e-4)
    with pytest.raises(ValueError):
        psy.psi_scaled(3, 7, math.inf)


def test_psi_range_size_series():
    series = psy.psi_range(7, 1.25, 5.0, baseline=2.5)
    for got, want in zip(series.values, PUBLISHED_SIZE_SERIES):
        assert got == pytest.approx(want, abs=0.01)


def test_psi_range_default_baseline_is_midpoint():
    series = psy.psi_range(7, 2.5, 7.5)
    assert list(series.values) == pytest.approx([2.5, 10 / 3, 25 / 6, 5.0, 35 / 6, 20 / 3, 7.5])


def test_psi_range_narrow_interval():
    series = psy.psi_range(7, 1.5, 1.8)
    assert list(series.values) == pytest.approx([1.5, 1.55, 1.6, 1.65, 1.7, 1.75, 1.8])


def test_psi_range_exact_endpoints_and_baseline():
    series = psy.psi_range(7, 1.25, 5.0, baseline=2.5)
    assert series.values[0] == 1.25
    assert series.values[3] == 2.5
    assert series.values[6] == 5.0


def test_psi_range_rejects_bad_ordering():
    with pytest.raises(ValueError):
        psy.psi_range(7, 1.0, 2.0, baseline=5.0)
    with pytest.raises(ValueError):
        psy.psi_range(5, 0.0, 1.0)


def test_phi_series_published_set():
    series = psy.phi_series(1.0, 0.0)
    assert [round(v) for v in series.values] == [0, 10, 19, 30, 42, 56, 90]
    for got, want in zip(series.values, PUBLISHED_ORIENTATION_SET):
        assert abs(got - want) <= 1.0


def test_phi_series_offset_and_zero_scale():
    shifted = psy.phi_series(1.0, 90.0)
    base = psy.phi_series(1.0, 0.0)
    for a, b in zip(shifted.values, base.values):
        assert a == pytest.approx(b + 90.0)
    flat = psy.phi_series(0.0, 45.0)
    assert all(v == 45.0 for v in flat.values)


def test_phi_series_rejects_arcsine_domain_violation():
    with pytest.raises(ValueError):
        psy.phi_series(90 / 40, 0.0)


def test_delta_phi():
    assert psy.delta_phi(0.0, 90.0) == 90.0
    assert psy.delta_phi(170.0, 0.0) == 10.0
    for x in (0.0, 13.0, 90.0, 179.5):
        assert psy.delta_phi(x, x) == 0.0


def test_delta_phi_symmetric_and_bounded():
    import random

    rnd = random.Random(1)
    for _ in range(500):
        a, b = rnd.uniform(0, 360), rnd.uniform(0, 360)
        assert psy.delta_phi(a, b) == pytest.approx(psy.delta_phi(b, a))
        assert 0.0 <= psy.delta_phi(a, b) <= 90.0


def test_pattern_angle():
    assert psy.pattern_angle(10.0, 2, 3) == 50.0
    assert psy.pattern_angle(0.0, 5, 9) == 0.0
    # a bar at 180 degrees is the same bar at 0
    assert psy.pattern_angle(90.0, 1, 1) == 0.0
    with pytest.raises(ValueError):
        psy.pattern_angle(10.0, -1, 0)


GREY_BG = (0.0, 0.0, 0.75)
RED_TARGET = (0.0, 1.0, 0.75)


def test_color_geometry_published_theta_and_delta_s():
    # six published values for indices 1,2,3,5,6,7 (the x=4 midpoint is unlisted)
    for x, theta_want, ds_want in zip((1, 2, 3, 5, 6, 7), PUBLISHED_THETA, PUBLISHED_DELTA_S):
        geom = psy.color_geometry(GREY_BG, RED_TARGET, x)
        assert abs(geom.theta - theta_want) <= 1.0
        assert abs(geom.deltaS_DT - ds_want) <= 0.01


def test_color_geometry_angle_sum_invariant():
    for x in range(1, 8):
        geom = psy.color_geometry(GREY_BG, RED_TARGET, x)
        assert geom.alpha + geom.beta + geom.theta == pytest.approx(90.0, abs=1e-9)
        assert 0.0 <= geom.S_D <= 1.0


def test_color_geometry_zero_contrast():
    geom = psy.color_geometry(GREY_BG, RED_TARGET, 1)
    assert geom.theta == 0.0
    assert geom.deltaS_DT == 0.0
    assert geom.S_D == RED_TARGET[1]


def test_color_geometry_rejects_degenerate_pair():
    with pytest.raises(ValueError):
        psy.color_geometry(RED_TARGET, RED_TARGET, 3)


def test_color_geometry_formula_reading_oracle():
    """Tabulate the two candidate readings of the saturation-difference
    formula against the published pairs and confirm the adopted one.

    Reading A (adopted): deltaS = span * tan(alpha) * tan(theta).
    Reading B (triangle-literal): the distractor sits on the beta ray at the
    isoluminant height, deltaS = |S_T - span * tan(beta) * tan(alpha)|.
    """
    alpha = math.radians(psy.COLOR_CONTRAST_ALPHA_DEG)
    err_a = err_b = 0.0
    for x, ds_want in zip((1, 2, 3, 5, 6, 7), PUBLISHED_DELTA_S):
        theta = math.radians((90.0 - psy.COLOR_CONTRAST_ALPHA_DEG) * psy.psi(x, 7))
        beta = math.pi / 2 - alpha - theta
        reading_a = min(math.tan(alpha) * math.tan(theta), 1.0)
        reading_b = abs(1.0 - math.tan(alpha) * math.tan(beta))
        err_a = max(err_a, abs(reading_a - ds_want))
        err_b = max(err_b, abs(reading_b - ds_want))
    assert err_a <= 0.01
    assert err_b > 0.1  # the literal triangle reading does not fit the data


@pytest.mark.parametrize(
    "l_bg,l_tgt,x,delta_want,ld_want",
    [
        (1.0, 0.5, 5, 1 / 3, 2 / 3),
        (0.0, 0.5, 3, 1 / 3, 1 / 6),
        (1.0, 0.5, 1, 0.0, 1.0),
    ],
)
def test_lightness_contrast_published_pairs(l_bg, l_tgt, x, delta_want, ld_want):
    lc = psy.lightness_contrast(l_bg, l_tgt, x)
    assert lc.deltaL_DT == pytest.approx(delta_want, abs=1e-12)
    assert lc.L_D == pytest.approx(ld_want, abs=1e-12)


def test_lightness_contrast_rejects_out_of_range():
    with pytest.raises(ValueError):
        psy.lightness_contrast(1.5, 0.5, 3)


def test_contrast_series_validation():
    with pytest.raises(ValueError):
        psy.ContrastSeries(3, (1.0, 2.0))
    with pytest.raises(ValueError):
        psy.ContrastSeries(3, (2.0, 1.0, 3.0))
    series = psy.ContrastSeries(3, (1.0, 2.0, 3.0))
    assert series[1] == 1.0 and series[3] == 3.0
    with pytest.raises(IndexError):
        series[0]
