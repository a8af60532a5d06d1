"""One-tailed Wilcoxon signed-rank test, FDR correction, and Cliff's delta.

The Wilcoxon test uses the exact null distribution of the signed-rank sum
(with midranks for tied absolute differences) up to ``EXACT_LIMIT`` non-zero
differences, and a tie-corrected normal approximation with continuity
correction beyond that. Zero differences are dropped before ranking.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Sequence

EXACT_LIMIT = 25

NEGLIGIBLE = "negligible"
SMALL = "small"
MEDIUM = "medium"
LARGE = "large"

# |delta| thresholds separating negligible/small/medium/large effects.
SMALL_THRESHOLD = 0.147
MEDIUM_THRESHOLD = 0.33
LARGE_THRESHOLD = 0.474


@dataclass(frozen=True)
class PairedSample:
    """Two aligned measurement lists compared pairwise."""

    x: tuple[float, ...]
    y: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.x) != len(self.y):
            raise ValueError(f"paired sample lengths differ: {len(self.x)} vs {len(self.y)}")
        if len(self.x) < 1:
            raise ValueError("paired sample must contain at least one pair")

    @classmethod
    def of(cls, x: Sequence[float], y: Sequence[float]) -> "PairedSample":
        return cls(tuple(float(v) for v in x), tuple(float(v) for v in y))


@dataclass(frozen=True)
class EffectSize:
    """Cliff's delta with its conventional magnitude label."""

    delta: float
    magnitude: str


def _midranks(values: Sequence[float]) -> list[float]:
    """Ranks of `values` ascending, ties receiving the mean of their positions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mid = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = mid
        i = j + 1
    return ranks


def _exact_upper_tail(ranks: Sequence[float], w_plus: float) -> float:
    """P(W+ >= w_plus) under random signs, by subset-sum counting.

    Midranks are multiples of 0.5, so doubling yields an integer
    convolution. Counts stay below 2**len(ranks) and divide exactly.
    """
    doubled = [round(2.0 * r) for r in ranks]
    total = sum(doubled)
    ways = [0] * (total + 1)
    ways[0] = 1
    for d in doubled:
        for s in range(total, d - 1, -1):
            ways[s] += ways[s - d]
    target = 2.0 * w_plus
    # Observed sums are half-integers; compare against the integer grid
    # with a small epsilon to absorb float noise from midrank arithmetic.
    threshold = math.ceil(target - 1e-9)
    count = sum(ways[threshold:]) if threshold <= total else 0
    return count / float(2 ** len(ranks))


def _approx_upper_tail(ranks: Sequence[float], w_plus: float) -> float:
    """Tie-corrected normal approximation with continuity correction."""
    n = len(ranks)
    mu = n * (n + 1) / 4.0
    sigma2 = n * (n + 1) * (2 * n + 1) / 24.0
    # Tie correction over groups of equal absolute differences.
    seen: dict[float, int] = {}
    for r in ranks:
        seen[r] = seen.get(r, 0) + 1
    for count in seen.values():
        if count > 1:
            sigma2 -= (count**3 - count) / 48.0
    if sigma2 <= 0:
        return 1.0 if w_plus <= mu else 0.0
    z = (w_plus - 0.5 - mu) / math.sqrt(sigma2)
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def wilcoxon_signed_rank_one_tailed(sample: PairedSample) -> float:
    """p-value for the alternative hypothesis x > y (paired, one-tailed).

    Raises ValueError when every difference is zero (test undefined).
    """
    diffs = [a - b for a, b in zip(sample.x, sample.y) if a != b]
    if not diffs:
        raise ValueError("all paired differences are zero; signed-rank test undefined")
    ranks = _midranks([abs(d) for d in diffs])
    w_plus = sum(r for r, d in zip(ranks, diffs) if d > 0)
    if len(diffs) <= EXACT_LIMIT:
        return _exact_upper_tail(ranks, w_plus)
    return _approx_upper_tail(ranks, w_plus)


def benjamini_hochberg(p_values: Sequence[float], q: float) -> list[tuple[float, bool]]:
    """Step-up FDR control; returns (adjusted_p, reject) in input order."""
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    for p in p_values:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p-value outside [0, 1]: {p}")
    m = len(p_values)
    if m == 0:
        return []
    order = sorted(range(m), key=lambda i: p_values[i])
    adjusted = [0.0] * m
    running = 1.0
    for rank in range(m, 0, -1):
        idx = order[rank - 1]
        running = min(running, m * p_values[idx] / rank)
        adjusted[idx] = running
    return [(adjusted[i], adjusted[i] <= q) for i in range(m)]


def cliffs_delta(x: Sequence[float], y: Sequence[float]) -> EffectSize:
    """Dominance statistic (#{x_i > y_j} - #{x_i < y_j}) / (|x| |y|)."""
    if not x or not y:
        raise ValueError("cliffs_delta requires two non-empty samples")
    ys = sorted(y)
    n = len(ys)
    greater = 0
    less = 0
    for xi in x:
        greater += bisect_left(ys, xi)
        less += n - bisect_right(ys, xi)
    delta = (greater - less) / (len(x) * n)
    return EffectSize(delta=delta, magnitude=_magnitude(delta))


def _magnitude(delta: float) -> str:
    a = abs(delta)
    if a > LARGE_THRESHOLD:
        return LARGE
    if a > MEDIUM_THRESHOLD:
        return MEDIUM
    if a > SMALL_THRESHOLD:
        return SMALL
    return NEGLIGIBLE
