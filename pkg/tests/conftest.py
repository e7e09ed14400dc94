"""Shared fixtures: a pure-Python coarray oracle and a memoised design space."""

from __future__ import annotations

from collections.abc import Callable, Iterable
from functools import cache

import pytest

from mlpa_design.search import DesignSpace, score_design_space

Metrics = tuple[int, int, int, int]


def brute_force_metrics(positions: Iterable[int]) -> Metrics:
    """(unique lags, consecutive lags, unit spacings, holes) by explicit pair loops."""
    points = sorted(set(positions))
    lags = set()
    for a in points:
        for b in points:
            lags.add(a - b)
    m = 0
    while m + 1 in lags:
        m += 1
    unit = 0
    for a in points:
        for b in points:
            if b - a == 1:
                unit += 1
    positive = [lag for lag in lags if lag > 0]
    holes = max(positive) - len(positive) if positive else 0
    return len(lags), 2 * m + 1, unit, holes


@pytest.fixture(scope="session")
def oracle() -> Callable[[Iterable[int]], Metrics]:
    return brute_force_metrics


@cache
def _space(total: int, levels: int) -> DesignSpace:
    return score_design_space(total, levels)


@pytest.fixture(scope="session")
def design_space() -> Callable[[int, int], DesignSpace]:
    """``design_space(N, L)``, computed once per session."""
    return _space
