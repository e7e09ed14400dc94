"""Difference coarray of a linear integer array and its lag metrics.

The coarray of positions ``p`` is the multiset ``{p_i − p_j}`` over all
ordered pairs.  Lag counts are two-sided: negative lags and zero are
counted, so the unique and consecutive counts are always odd.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import numpy as np

from mlpa_design.errors import InvalidPositionsError


@dataclass(frozen=True)
class CoarrayReport:
    """Distinct lags with their weights and the derived lag metrics."""

    lags: tuple[int, ...]
    weights: Mapping[int, int] = field(repr=False)
    unique_count: int
    consecutive_count: int
    unit_spacing_count: int
    hole_count: int

    @property
    def element_count(self) -> int:
        return self.weights[0]

    @property
    def max_lag(self) -> int:
        return self.lags[-1]


def _as_array(positions: Iterable[int]) -> np.ndarray:
    arr = np.unique(np.fromiter((int(p) for p in positions), dtype=np.int64))
    if arr.size == 0:
        raise InvalidPositionsError("position set is empty")
    if arr[0] < 0:
        raise InvalidPositionsError(f"positions must be nonnegative, got {int(arr[0])}")
    return arr


def difference_coarray(positions: Iterable[int]) -> CoarrayReport:
    """Compute the difference coarray of *positions* and every lag metric.

    Positions are deduplicated first; weights count ordered pairs of the
    distinct positions, so ``weights[0]`` is the element count.

    Raises
    ------
    InvalidPositionsError
        *positions* is empty or holds a negative value.
    """
    arr = _as_array(positions)
    diffs = np.subtract.outer(arr, arr).ravel()
    lag_values, counts = np.unique(diffs, return_counts=True)
    lags = tuple(int(v) for v in lag_values)
    weights = {int(v): int(c) for v, c in zip(lag_values, counts)}

    positive = lag_values[lag_values > 0]
    return CoarrayReport(
        lags=lags,
        weights=weights,
        unique_count=len(lags),
        consecutive_count=2 * _leading_run(positive) + 1,
        unit_spacing_count=weights.get(1, 0),
        hole_count=int(positive[-1]) - positive.size if positive.size else 0,
    )


def _leading_run(positive: np.ndarray) -> int:
    """Largest m with 1..m all present in the sorted positive lags."""
    expected = np.arange(1, positive.size + 1)
    mismatch = np.flatnonzero(positive != expected)
    return int(mismatch[0]) if mismatch.size else int(positive.size)


def unique_lag_count(report: CoarrayReport) -> int:
    """Number of distinct lags, negatives and zero included."""
    return report.unique_count


def consecutive_lag_count(report: CoarrayReport) -> int:
    """Size ``2m + 1`` of the zero-centred run ``[−m, m]`` contained in the lags."""
    return report.consecutive_count


def hole_count(report: CoarrayReport) -> int:
    """Missing lags strictly between 0 and the largest lag (one-sided)."""
    return report.hole_count


def unit_spacing_count(positions: Iterable[int]) -> int:
    """Number of element pairs exactly one unit apart."""
    arr = _as_array(positions)
    return int(np.count_nonzero(np.diff(arr) == 1))
