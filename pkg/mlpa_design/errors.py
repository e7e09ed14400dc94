"""Exception hierarchy for ``mlpa_design``.

Library code raises these; only :mod:`mlpa_design.cli` turns them into
exit codes.
"""

from __future__ import annotations


class MlpaError(Exception):
    """Base class for every error raised by this package."""


class InvalidPartitionError(MlpaError):
    """Element counts are not a valid MLPA partition."""


class NonCoprimeError(InvalidPartitionError):
    """Two subarray element counts share a common factor."""


class InvalidSpacingError(MlpaError):
    """Spacing vector is not a fixed-point-free permutation of the counts."""


class CoincidentElementsError(InvalidSpacingError):
    """Two subarrays share an element away from the origin."""


class InvalidPositionsError(MlpaError):
    """Position set is empty or contains negative entries."""


class NonCoprimePairError(MlpaError):
    """Coprime reference array parameters are not a valid coprime pair."""


class InfeasibleQueryError(MlpaError):
    """No admissible MLPA exists for the requested (N, L)."""


class CacheError(MlpaError):
    """A cache entry could not be read or decoded."""


class ConfigError(MlpaError):
    """Settings file or settings value is malformed."""


class InvalidQueryError(MlpaError, ValueError):
    """Design query parameters are outside their domain."""
