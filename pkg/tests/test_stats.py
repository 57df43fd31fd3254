import itertools
import math

import numpy as np
import pytest
from scipy import stats as sps

from salstim.stats import (
    _average_ranks,
    kruskal_wallis,
    spearman,
    wilcoxon_signed_rank,
)


def test_average_ranks_with_ties():
    assert _average_ranks([10, 20, 20, 30]) == [1.0, 2.5, 2.5, 4.0]


def test_spearman_perfect_antimonotone():
    assert spearman([1, 2, 3], [3, 2, 1]).rho == -1.0


def test_spearman_closed_form_value():
    # no ties: rho = 1 - 6*sum(d^2)/(n(n^2-1)); here sum(d^2) = 4, n = 5
    res = spearman([1, 2, 3, 4, 5], [1, 3, 2, 5, 4])
    assert res.rho == 0.8
    assert res.n == 5


def test_spearman_identity():
    assert spearman([3, 9, 1, 4], [3, 9, 1, 4]).rho == 1.0


def test_spearman_monotone_transform_invariance():
    rng = np.random.default_rng(0)
    x = rng.normal(size=30)
    y = rng.normal(size=30)
    base = spearman(x, y)
    assert spearman(np.exp(x), y).rho == pytest.approx(base.rho)
    assert spearman(x, 3 * y + 7).rho == pytest.approx(base.rho)


def test_spearman_matches_scipy():
    rng = np.random.default_rng(5)
    for _ in range(20):
        x = rng.integers(0, 10, size=15).astype(float)  # ties likely
        y = rng.normal(size=15)
        if len(set(x)) < 2:
            continue
        mine = spearman(x, y)
        ref_rho, ref_p = sps.spearmanr(x, y)
        assert mine.rho == pytest.approx(ref_rho, abs=1e-12)
        assert mine.p == pytest.approx(ref_p, abs=1e-9)


def test_spearman_errors():
    with pytest.raises(ValueError):
        spearman([1, 2], [1, 2])
    with pytest.raises(ValueError):
        spearman([1, 1, 1], [1, 2, 3])
    with pytest.raises(ValueError):
        spearman([1, 2, 3], [1, 2])


def test_kruskal_wallis_hand_value():
    # ranks 1,2 | 3,4: H = 12/(4*5) * (2*1.5^2 + 2*3.5^2) - 3*5 = 2.4
    res = kruskal_wallis([[1, 2], [3, 4]])
    assert res.statistic == pytest.approx(2.4, abs=1e-12)
    assert res.medians == (1.5, 3.5)


def test_kruskal_wallis_identical_groups():
    res = kruskal_wallis([[5, 6, 7], [5, 6, 7]])
    assert res.statistic == pytest.approx(0.0, abs=1e-12)


def test_kruskal_wallis_all_tied():
    res = kruskal_wallis([[3, 3], [3, 3, 3]])
    assert res.statistic == 0.0
    assert res.p == 1.0


def test_kruskal_wallis_permutation_invariance():
    groups = [[1.0, 5.0, 2.0], [4.0, 4.0], [9.0, 0.5, 2.5, 7.0]]
    a = kruskal_wallis(groups)
    b = kruskal_wallis(groups[::-1])
    assert a.statistic == pytest.approx(b.statistic)
    assert a.p == pytest.approx(b.p)


def test_kruskal_wallis_matches_scipy():
    rng = np.random.default_rng(11)
    for _ in range(20):
        groups = [rng.integers(0, 8, size=rng.integers(3, 9)).astype(float) for _ in range(3)]
        mine = kruskal_wallis(groups)
        ref = sps.kruskal(*groups)
        assert mine.statistic == pytest.approx(ref.statistic, abs=1e-10)
        assert mine.p == pytest.approx(ref.pvalue, abs=1e-9)


def test_kruskal_wallis_errors():
    with pytest.raises(ValueError):
        kruskal_wallis([[1, 2]])
    with pytest.raises(ValueError):
        kruskal_wallis([[1, 2], []])


def test_wilcoxon_all_zero_differences():
    with pytest.raises(ValueError):
        wilcoxon_signed_rank([1, 2, 3], [1, 2, 3])


def test_wilcoxon_positive_shift_is_maximal():
    a = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]
    shifts = [0.5, 0.7, 1.1, 1.3, 1.9, 2.3]
    res = wilcoxon_signed_rank([x + s for x, s in zip(a, shifts)], a)
    n = len(a)
    max_z = (n * (n + 1) / 2 - n * (n + 1) / 4) / math.sqrt(n * (n + 1) * (2 * n + 1) / 24)
    assert res.statistic == pytest.approx(max_z)
    # constant shift: every rank positive, statistic at the tie-corrected peak
    tied = wilcoxon_signed_rank([x + 2.0 for x in a], a)
    assert tied.statistic > 0 and tied.statistic >= res.statistic


def exact_signed_rank_p(diffs):
    """Two-sided p by exhaustive enumeration of sign patterns on the ranks."""
    ranks = _average_ranks([abs(d) for d in diffs])
    n = len(diffs)
    mu = n * (n + 1) / 4.0
    w_obs = sum(r for r, d in zip(ranks, diffs) if d > 0)
    count = 0
    for signs in itertools.product((0, 1), repeat=n):
        w = sum(r for r, s in zip(ranks, signs) if s)
        if abs(w - mu) >= abs(w_obs - mu) - 1e-12:
            count += 1
    return count / 2.0 ** n


def test_wilcoxon_against_exhaustive_enumeration():
    rng = np.random.default_rng(7)
    for n in (6, 7, 8):
        for _ in range(10):
            a = rng.normal(0.0, 1.0, n)
            b = a + rng.normal(0.4, 1.0, n)
            diffs = [x - y for x, y in zip(a, b) if x != y]
            res = wilcoxon_signed_rank(a, b)
            assert abs(res.p - exact_signed_rank_p(diffs)) <= 0.05
            assert 0.0 <= res.p <= 1.0


def test_statistics_finite_on_valid_input():
    rng = np.random.default_rng(13)
    x = rng.normal(size=50)
    y = rng.normal(size=50)
    res = spearman(x, y)
    assert math.isfinite(res.rho) and 0.0 <= res.p <= 1.0
    kw = kruskal_wallis([x[:20], x[20:35], x[35:]])
    assert kw.statistic >= 0.0 and 0.0 <= kw.p <= 1.0
