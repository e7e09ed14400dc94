"""MLPA configurations and their closed-form geometry.

An MLPA is the union of ``L`` uniform linear subarrays that share the
origin.  Subarray ``i`` has ``N_i`` elements spaced ``S_i`` units apart,
where the counts ``n = [N_1, ..., N_L]`` are pairwise coprime and strictly
increasing, and the spacing vector ``S`` is a fixed-point-free
permutation of ``n``.

All lengths are integers in units of ``d = λ/2``.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from math import gcd

from mlpa_design.errors import (
    CoincidentElementsError,
    InvalidPartitionError,
    InvalidSpacingError,
    NonCoprimeError,
)

# ── Constants ────────────────────────────────────────────────────────────────

MIN_LEVELS = 2
MIN_COUNT = 2

# Violation categories, grouped in this order by ``mlpa validate``.
CATEGORY_PARTITION = "partition"
CATEGORY_COPRIME = "coprime"
CATEGORY_SPACING = "spacing"
CATEGORY_COINCIDENT = "coincident"

_PARTITION_CATEGORIES = frozenset({CATEGORY_PARTITION, CATEGORY_COPRIME})


# ── Data classes ─────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class Partition:
    """Subarray element counts ``N_1 < N_2 < ... < N_L``."""

    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))

    @property
    def levels(self) -> int:
        return len(self.counts)

    def __str__(self) -> str:
        return "[" + ",".join(str(c) for c in self.counts) + "]"


@dataclass(frozen=True)
class SpacingOrder:
    """Ordered inter-element spacings ``S_1 ... S_L`` in units of d."""

    spacings: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "spacings", tuple(int(s) for s in self.spacings))

    def __str__(self) -> str:
        return "[" + ",".join(str(s) for s in self.spacings) + "]"


@dataclass(frozen=True)
class MlpaConfig:
    """A concrete array: counts, spacings and the element positions they generate."""

    partition: Partition
    spacing: SpacingOrder
    positions: tuple[int, ...] = field(repr=False)
    total_elements: int
    aperture: int

    @property
    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Identity of the configuration, used for set membership and ordering."""
        return (self.partition.counts, self.spacing.spacings)


@dataclass(frozen=True)
class Violation:
    """A single violated configuration invariant."""

    message: str
    category: str

    def __str__(self) -> str:
        return f"[{self.category}] {self.message}"


def _as_partition(partition: Partition | Sequence[int]) -> Partition:
    return partition if isinstance(partition, Partition) else Partition(tuple(partition))


def _as_spacing(spacing: SpacingOrder | Sequence[int]) -> SpacingOrder:
    return spacing if isinstance(spacing, SpacingOrder) else SpacingOrder(tuple(spacing))


# ── Validation ───────────────────────────────────────────────────────────────


def _partition_violations(counts: tuple[int, ...]) -> list[Violation]:
    violations: list[Violation] = []
    if len(counts) < MIN_LEVELS:
        violations.append(
            Violation(f"need at least {MIN_LEVELS} levels, got {len(counts)}", CATEGORY_PARTITION)
        )
    if counts and counts[0] < MIN_COUNT:
        violations.append(
            Violation(f"N_1 = {counts[0]} is below the minimum of {MIN_COUNT}", CATEGORY_PARTITION)
        )
    for i in range(len(counts) - 1):
        if counts[i] >= counts[i + 1]:
            violations.append(
                Violation(
                    f"counts not strictly increasing: N_{i + 1} = {counts[i]} "
                    f">= N_{i + 2} = {counts[i + 1]}",
                    CATEGORY_PARTITION,
                )
            )
    for i in range(len(counts)):
        for j in range(i + 1, len(counts)):
            g = gcd(counts[i], counts[j])
            if g != 1:
                violations.append(
                    Violation(f"gcd({counts[i]},{counts[j]})={g}", CATEGORY_COPRIME)
                )
    return violations


def coincident_pairs(
    counts: Sequence[int], spacings: Sequence[int]
) -> list[tuple[int, int]]:
    """Return index pairs ``(i, j)`` whose subarrays meet away from the origin.

    Subarrays ``i`` and ``j`` share the point ``k_i·S_i = k_j·S_j > 0`` iff
    ``S_j < N_i`` and ``S_i < N_j`` (coprime spacings force ``k_i`` to be a
    multiple of ``S_j``).
    """
    pairs: list[tuple[int, int]] = []
    for i in range(len(counts)):
        for j in range(i + 1, len(counts)):
            if spacings[j] < counts[i] and spacings[i] < counts[j]:
                pairs.append((i, j))
    return pairs


def _spacing_violations(counts: tuple[int, ...], spacings: tuple[int, ...]) -> list[Violation]:
    if sorted(spacings) != sorted(counts):
        return [
            Violation(
                f"spacing {list(spacings)} is not a permutation of counts {list(counts)}",
                CATEGORY_SPACING,
            )
        ]
    violations = [
        Violation(f"S_{i + 1} = N_{i + 1} = {s}", CATEGORY_SPACING)
        for i, (s, n) in enumerate(zip(spacings, counts))
        if s == n
    ]
    for i, j in coincident_pairs(counts, spacings):
        violations.append(
            Violation(
                f"subarrays {i + 1} and {j + 1} share element "
                f"{spacings[i] * spacings[j]} (S_{j + 1}={spacings[j]} < N_{i + 1}={counts[i]}, "
                f"S_{i + 1}={spacings[i]} < N_{j + 1}={counts[j]})",
                CATEGORY_COINCIDENT,
            )
        )
    return violations


def validate_config(
    partition: Partition | Sequence[int],
    spacing: SpacingOrder | Sequence[int] | None = None,
) -> list[Violation]:
    """Report every violated invariant; an empty list means the config is valid.

    Never raises.  When *spacing* is *None* only the partition is checked.
    """
    counts = _as_partition(partition).counts
    violations = _partition_violations(counts)
    if spacing is not None:
        violations.extend(_spacing_violations(counts, _as_spacing(spacing).spacings))
    return violations


def check_config(
    partition: Partition | Sequence[int],
    spacing: SpacingOrder | Sequence[int] | None = None,
) -> None:
    """Raise the error matching the most fundamental class of violation found."""
    violations = validate_config(partition, spacing)
    if not violations:
        return

    def joined(*categories: str) -> str:
        return "; ".join(v.message for v in violations if v.category in categories)

    found = {v.category for v in violations}
    if CATEGORY_PARTITION in found:
        raise InvalidPartitionError(joined(*_PARTITION_CATEGORIES))
    if CATEGORY_COPRIME in found:
        raise NonCoprimeError(joined(CATEGORY_COPRIME))
    if CATEGORY_SPACING in found:
        raise InvalidSpacingError(joined(CATEGORY_SPACING))
    raise CoincidentElementsError(joined(CATEGORY_COINCIDENT))


# ── Geometry ─────────────────────────────────────────────────────────────────


def total_elements(partition: Partition | Sequence[int]) -> int:
    """Element count ``N = ΣN_i − (L − 1)``; the shared origin counts once."""
    counts = _as_partition(partition).counts
    return sum(counts) - (len(counts) - 1)


def raw_positions(
    partition: Partition | Sequence[int], spacing: SpacingOrder | Sequence[int]
) -> list[int]:
    """Subarray positions concatenated before deduplication."""
    counts = _as_partition(partition).counts
    spacings = _as_spacing(spacing).spacings
    return [k * s for n, s in zip(counts, spacings) for k in range(n)]


def build_positions(
    partition: Partition | Sequence[int], spacing: SpacingOrder | Sequence[int]
) -> tuple[int, ...]:
    """Sorted, deduplicated element positions of the MLPA.

    Raises
    ------
    NonCoprimeError, InvalidPartitionError
        The counts are not a valid partition.
    InvalidSpacingError
        The spacing is not a fixed-point-free permutation of the counts.
    CoincidentElementsError
        Two subarrays meet away from the origin, so fewer than N elements
        would be realised.
    """
    check_config(partition, spacing)
    return tuple(sorted(set(raw_positions(partition, spacing))))


def aperture(
    partition: Partition | Sequence[int], spacing: SpacingOrder | Sequence[int]
) -> int:
    """Array extent ``max_i S_i·(N_i − 1)`` over all subarrays."""
    counts = _as_partition(partition).counts
    spacings = _as_spacing(spacing).spacings
    return max(s * (n - 1) for n, s in zip(counts, spacings))


def last_two_aperture(
    partition: Partition | Sequence[int], spacing: SpacingOrder | Sequence[int]
) -> int:
    """Extent of the last two subarrays only, ``max(S_{L-1}(N_{L-1}−1), S_L(N_L−1))``."""
    counts = _as_partition(partition).counts[-2:]
    spacings = _as_spacing(spacing).spacings[-2:]
    return max(s * (n - 1) for n, s in zip(counts, spacings))


def spacing_pattern(
    partition: Partition | Sequence[int], spacing: SpacingOrder | Sequence[int]
) -> tuple[int, ...]:
    """1-based index of each spacing within the sorted counts.

    ``n=[2,3,5], S=[5,2,3]`` gives ``(3, 1, 2)``, i.e. ``[N3, N1, N2]``.
    """
    counts = _as_partition(partition).counts
    index = {c: i + 1 for i, c in enumerate(counts)}
    return tuple(index[s] for s in _as_spacing(spacing).spacings)


def format_pattern(pattern: Sequence[int]) -> str:
    return ",".join(f"N{i}" for i in pattern)


def make_config(
    partition: Partition | Sequence[int], spacing: SpacingOrder | Sequence[int]
) -> MlpaConfig:
    """Validate and build a :class:`MlpaConfig`."""
    part = _as_partition(partition)
    spac = _as_spacing(spacing)
    positions = build_positions(part, spac)
    return MlpaConfig(
        partition=part,
        spacing=spac,
        positions=positions,
        total_elements=total_elements(part),
        aperture=aperture(part, spac),
    )
