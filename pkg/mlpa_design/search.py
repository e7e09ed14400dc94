"""Exhaustive MLPA design search.

Responsibilities
----------------
* Enumerate every pairwise-coprime partition of an element budget.
* Enumerate every fixed-point-free spacing order of a partition.
* Score each admissible configuration by its coarray lag metrics.
* Select the argmax set for the unique-lag, consecutive-lag or joint
  objective and rank ties by unit-spacing count, aperture, then spacing.

Scoring fans partitions out to worker processes when asked to; results
are merged in partition order, so every output is independent of the
worker count.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial
from math import gcd

from mlpa_design.coarray import CoarrayReport, difference_coarray
from mlpa_design.core import (
    MIN_COUNT,
    MIN_LEVELS,
    MlpaConfig,
    Partition,
    SpacingOrder,
    coincident_pairs,
    make_config,
)
from mlpa_design.errors import InfeasibleQueryError, InvalidQueryError

# ── Constants ────────────────────────────────────────────────────────────────

OBJECTIVE_UNIQUE = "unique"
OBJECTIVE_CONSECUTIVE = "consecutive"
OBJECTIVE_JOINT = "joint"
OBJECTIVES = (OBJECTIVE_UNIQUE, OBJECTIVE_CONSECUTIVE, OBJECTIVE_JOINT)

LABEL_UNIQUE = "l_ug"
LABEL_CONSECUTIVE = "l_cg"

Evaluated = tuple[MlpaConfig, CoarrayReport]
ConfigKey = tuple[tuple[int, ...], tuple[int, ...]]


# ── Data classes ─────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class DesignQuery:
    """Element budget, level count and objective of a design search."""

    total_elements: int
    levels: int
    objective: str = OBJECTIVE_UNIQUE
    max_count_bound: int | None = None

    def __post_init__(self) -> None:
        if self.total_elements < 1:
            raise InvalidQueryError(f"N must be >= 1, got {self.total_elements}")
        if self.levels < MIN_LEVELS:
            raise InvalidQueryError(f"L must be >= {MIN_LEVELS}, got {self.levels}")
        if self.objective not in OBJECTIVES:
            raise InvalidQueryError(
                f"objective must be one of {', '.join(OBJECTIVES)}, got {self.objective!r}"
            )


@dataclass(frozen=True)
class CandidateScore:
    """Lag metrics of one admissible configuration, without the full coarray."""

    counts: tuple[int, ...]
    spacing: tuple[int, ...]
    unique: int
    consecutive: int
    unit_spacing: int
    aperture: int
    holes: int

    @property
    def key(self) -> ConfigKey:
        return (self.counts, self.spacing)


@dataclass(frozen=True)
class DesignSpace:
    """Every admissible configuration for one (N, L), in enumeration order."""

    total_elements: int
    levels: int
    partitions: int
    examined: int
    rejected: int
    candidates: tuple[CandidateScore, ...] = field(repr=False)

    @property
    def feasible(self) -> bool:
        return bool(self.candidates)


@dataclass(frozen=True)
class DesignResult:
    """Argmax set of a query, best-ranked first.

    ``is_joint`` is true when ``recommended`` maximizes both lag counts.
    ``fallbacks`` holds the separate unique and consecutive results when a
    joint query has an empty intersection.
    """

    query: DesignQuery
    optimum_value: int
    optima: tuple[Evaluated, ...]
    recommended: MlpaConfig | None
    is_joint: bool
    unique_value: int
    consecutive_value: int
    joint_keys: frozenset[ConfigKey] = frozenset()
    fallbacks: tuple[DesignResult, ...] = ()


@dataclass(frozen=True)
class SweepRow:
    """Unique and consecutive results for one N; both *None* when infeasible."""

    total_elements: int
    levels: int
    unique: DesignResult | None
    consecutive: DesignResult | None

    @property
    def feasible(self) -> bool:
        return self.unique is not None


@dataclass(frozen=True)
class Alternative:
    """A configuration that maximizes at least one lag count."""

    config: MlpaConfig
    report: CoarrayReport
    labels: tuple[str, ...]


# ── Enumeration ──────────────────────────────────────────────────────────────


def enumerate_coprime_partitions(
    total: int, levels: int, *, max_count: int | None = None
) -> list[Partition]:
    """All strictly increasing, pairwise-coprime count vectors for (N, L).

    Counts are at least 2 and sum to ``N + L − 1``.  Returned in
    lexicographic order; an infeasible budget gives an empty list.
    """
    if total < 1 or levels < MIN_LEVELS:
        raise InvalidQueryError(f"need N >= 1 and L >= {MIN_LEVELS}, got N={total}, L={levels}")

    found: list[Partition] = []
    prefix: list[int] = []

    def extend(smallest: int, remaining: int) -> None:
        slots = levels - len(prefix)
        if slots == 1:
            candidates: Iterable[int] = [remaining] if remaining >= smallest else []
        else:
            # The other slots need at least (v+1) + ... + (v+slots-1).
            largest = (remaining - slots * (slots - 1) // 2) // slots
            candidates = range(smallest, largest + 1)
        for v in candidates:
            if max_count is not None and v > max_count:
                break
            if all(gcd(v, c) == 1 for c in prefix):
                prefix.append(v)
                if slots == 1:
                    found.append(Partition(tuple(prefix)))
                else:
                    extend(v + 1, remaining - v)
                prefix.pop()

    extend(MIN_COUNT, total + levels - 1)
    return found


def enumerate_spacing_orders(partition: Partition) -> list[SpacingOrder]:
    """Permutations of the counts with no fixed point, in lexicographic order."""
    counts = partition.counts
    return [
        SpacingOrder(perm)
        for perm in itertools.permutations(counts)
        if all(s != n for s, n in zip(perm, counts))
    ]


# ── Scoring ──────────────────────────────────────────────────────────────────


def evaluate_config(
    partition: Partition | Sequence[int], spacing: SpacingOrder | Sequence[int]
) -> Evaluated:
    """Build the configuration and its coarray report (validation errors propagate)."""
    config = make_config(partition, spacing)
    return config, difference_coarray(config.positions)


def _score_partition(counts: tuple[int, ...]) -> tuple[int, list[CandidateScore]]:
    """Score every admissible order of one partition; module-level so it pickles."""
    partition = Partition(counts)
    orders = enumerate_spacing_orders(partition)
    scores: list[CandidateScore] = []
    for order in orders:
        if coincident_pairs(counts, order.spacings):
            continue
        config, report = evaluate_config(partition, order)
        scores.append(
            CandidateScore(
                counts=counts,
                spacing=order.spacings,
                unique=report.unique_count,
                consecutive=report.consecutive_count,
                unit_spacing=report.unit_spacing_count,
                aperture=config.aperture,
                holes=report.hole_count,
            )
        )
    return len(orders), scores


def score_design_space(
    total: int,
    levels: int,
    *,
    workers: int = 1,
    max_count: int | None = None,
) -> DesignSpace:
    """Score every admissible configuration for (N, L).

    Derangements whose subarrays meet away from the origin realise fewer
    than N elements; they are counted in ``examined`` and ``rejected`` but
    never scored.
    """
    jobs = [p.counts for p in enumerate_coprime_partitions(total, levels, max_count=max_count)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            chunks = list(executor.map(_score_partition, jobs))
    else:
        chunks = [_score_partition(counts) for counts in jobs]

    examined = sum(n for n, _ in chunks)
    candidates = tuple(score for _, scores in chunks for score in scores)
    return DesignSpace(
        total_elements=total,
        levels=levels,
        partitions=len(jobs),
        examined=examined,
        rejected=examined - len(candidates),
        candidates=candidates,
    )


# ── Optimization ─────────────────────────────────────────────────────────────


def rank_key(item: Evaluated) -> tuple[int, int, tuple[int, ...]]:
    config, report = item
    return (report.unit_spacing_count, config.aperture, config.spacing.spacings)


def rank_ties(optima: Iterable[Evaluated]) -> list[Evaluated]:
    """Order equally-scored configs: fewest unit spacings, smallest aperture, then
    lexicographically smallest spacing vector."""
    return sorted(optima, key=rank_key)


def _infeasible_message(space: DesignSpace) -> str:
    n, lv = space.total_elements, space.levels
    if space.partitions == 0:
        return f"no pairwise-coprime decomposition for N={n}, L={lv}"
    return (
        f"no admissible spacing order for N={n}, L={lv}: all {space.examined} "
        f"derangements of {space.partitions} partition(s) have coincident elements"
    )


def optimize(
    query: DesignQuery,
    *,
    space: DesignSpace | None = None,
    workers: int = 1,
) -> DesignResult:
    """Solve the query exhaustively.

    Parameters
    ----------
    query : DesignQuery
        Element budget, levels and objective.
    space : DesignSpace | None
        Precomputed scores for (N, L), e.g. from the result cache; computed
        when *None*.
    workers : int
        Worker processes used when *space* has to be computed.

    Raises
    ------
    InfeasibleQueryError
        No admissible configuration exists for (N, L).
    """
    if space is None:
        space = score_design_space(
            query.total_elements,
            query.levels,
            workers=workers,
            max_count=query.max_count_bound,
        )
    elif (space.total_elements, space.levels) != (query.total_elements, query.levels):
        raise InvalidQueryError(
            f"design space is for N={space.total_elements}, L={space.levels}, "
            f"query is for N={query.total_elements}, L={query.levels}"
        )
    if not space.feasible:
        raise InfeasibleQueryError(_infeasible_message(space))

    unique_value = max(c.unique for c in space.candidates)
    consecutive_value = max(c.consecutive for c in space.candidates)
    joint_keys = frozenset(
        c.key
        for c in space.candidates
        if c.unique == unique_value and c.consecutive == consecutive_value
    )

    if query.objective == OBJECTIVE_UNIQUE:
        value = unique_value
        chosen = [c for c in space.candidates if c.unique == unique_value]
    elif query.objective == OBJECTIVE_CONSECUTIVE:
        value = consecutive_value
        chosen = [c for c in space.candidates if c.consecutive == consecutive_value]
    else:
        value = unique_value
        chosen = [c for c in space.candidates if c.key in joint_keys]

    optima = tuple(rank_ties(evaluate_config(c.counts, c.spacing) for c in chosen))
    recommended = optima[0][0] if optima else None

    fallbacks: tuple[DesignResult, ...] = ()
    if query.objective == OBJECTIVE_JOINT and not optima:
        fallbacks = tuple(
            optimize(replace(query, objective=objective), space=space)
            for objective in (OBJECTIVE_UNIQUE, OBJECTIVE_CONSECUTIVE)
        )

    return DesignResult(
        query=query,
        optimum_value=value,
        optima=optima,
        recommended=recommended,
        is_joint=recommended is not None and recommended.key in joint_keys,
        unique_value=unique_value,
        consecutive_value=consecutive_value,
        joint_keys=joint_keys,
        fallbacks=fallbacks,
    )


SpaceProvider = Callable[[int, int], DesignSpace]


def sweep(
    levels: int,
    totals: Iterable[int],
    *,
    workers: int = 1,
    space_for: SpaceProvider | None = None,
) -> list[SweepRow]:
    """Unique and consecutive optima for every N in *totals*.

    Infeasible N yield a row with both results set to *None*.
    """
    provider = space_for or partial(score_design_space, workers=workers)
    rows: list[SweepRow] = []
    for n in totals:
        space = provider(n, levels)
        if not space.feasible:
            rows.append(SweepRow(n, levels, None, None))
            continue
        rows.append(
            SweepRow(
                total_elements=n,
                levels=levels,
                unique=optimize(DesignQuery(n, levels, OBJECTIVE_UNIQUE), space=space),
                consecutive=optimize(DesignQuery(n, levels, OBJECTIVE_CONSECUTIVE), space=space),
            )
        )
    return rows


def design_alternatives(
    total: int,
    levels: int,
    *,
    space: DesignSpace | None = None,
    workers: int = 1,
) -> list[Alternative]:
    """Union of the unique-lag and consecutive-lag argmax sets, ranked.

    Each entry is labelled with the lag counts it maximizes.
    """
    if space is None:
        space = score_design_space(total, levels, workers=workers)
    labelled: dict[ConfigKey, tuple[Evaluated, list[str]]] = {}
    for objective, label in (
        (OBJECTIVE_UNIQUE, LABEL_UNIQUE),
        (OBJECTIVE_CONSECUTIVE, LABEL_CONSECUTIVE),
    ):
        result = optimize(DesignQuery(total, levels, objective), space=space)
        for item in result.optima:
            labelled.setdefault(item[0].key, (item, []))[1].append(label)

    ranked = rank_ties(item for item, _ in labelled.values())
    return [
        Alternative(config, report, tuple(labelled[config.key][1]))
        for config, report in ranked
    ]
