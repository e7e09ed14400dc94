"""Reference sparse-array geometries for comparison with MLPA designs.

Nested arrays place ``N1`` dense elements at unit spacing followed by
``N2`` sparse elements at spacing ``N1 + 1``.  Extended coprime arrays
interleave ``N̄`` elements at spacing ``M`` with ``2M`` elements at
spacing ``N̄``.  Positions are returned shifted so the first element sits
at 0, in units of d.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from mlpa_design.errors import InvalidQueryError, NonCoprimePairError

FAMILY_NESTED = "nested"
FAMILY_COPRIME = "coprime"
FAMILIES = (FAMILY_NESTED, FAMILY_COPRIME)


@dataclass(frozen=True)
class ReferenceSpec:
    """A reference family with its parameter pair: (N1, N2) or (M, N̄)."""

    family: str
    params: tuple[int, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "params", tuple(int(p) for p in self.params))
        if self.family not in FAMILIES:
            raise InvalidQueryError(f"unknown reference family {self.family!r}")
        if len(self.params) != 2 or min(self.params) < 1:
            raise InvalidQueryError(f"{self.family} parameters must be two integers >= 1")
        if self.family == FAMILY_COPRIME:
            _check_coprime_pair(*self.params)

    def __str__(self) -> str:
        return f"{self.family}({self.params[0]},{self.params[1]})"


def _check_coprime_pair(m: int, n_bar: int) -> None:
    if gcd(m, n_bar) != 1:
        raise NonCoprimePairError(f"gcd({m},{n_bar})={gcd(m, n_bar)}; M and N̄ must be coprime")
    if m >= n_bar:
        raise NonCoprimePairError(f"need M < N̄, got M={m}, N̄={n_bar}")


def ula_positions(n: int) -> tuple[int, ...]:
    """Uniform linear array of *n* elements at unit spacing."""
    return tuple(range(n))


def nested_positions(n1: int, n2: int) -> tuple[int, ...]:
    """Two-level nested array with ``n1 + n2`` elements."""
    if n1 < 1 or n2 < 1:
        raise InvalidQueryError(f"nested array needs N1, N2 >= 1, got ({n1}, {n2})")
    inner = range(1, n1 + 1)
    outer = (k * (n1 + 1) for k in range(1, n2 + 1))
    return tuple(p - 1 for p in sorted({*inner, *outer}))


def coprime_positions(m: int, n_bar: int) -> tuple[int, ...]:
    """Extended coprime array with ``2M + N̄ − 1`` elements.

    Raises
    ------
    NonCoprimePairError
        ``gcd(M, N̄) != 1`` or ``M >= N̄``.
    """
    _check_coprime_pair(m, n_bar)
    first = (k * m for k in range(n_bar))
    second = (k * n_bar for k in range(2 * m))
    return tuple(sorted({*first, *second}))


def reference_positions(ref: ReferenceSpec) -> tuple[int, ...]:
    if ref.family == FAMILY_NESTED:
        return nested_positions(*ref.params)
    return coprime_positions(*ref.params)


def default_reference(family: str, total: int) -> ReferenceSpec | None:
    """Parameter choice used by ``mlpa compare`` for an N-element reference array.

    Nested arrays split N evenly (``N1 = ⌊N/2⌋``).  Coprime arrays take the
    largest ``M >= 2`` with ``M < N̄ = N + 1 − 2M`` and ``gcd(M, N̄) = 1``.
    Returns *None* when the family cannot realise N elements.
    """
    if family == FAMILY_NESTED:
        if total < 2:
            return None
        n1 = total // 2
        return ReferenceSpec(FAMILY_NESTED, (n1, total - n1))
    if family == FAMILY_COPRIME:
        for m in range(total // 2, 1, -1):
            n_bar = total + 1 - 2 * m
            if m < n_bar and gcd(m, n_bar) == 1:
                return ReferenceSpec(FAMILY_COPRIME, (m, n_bar))
        return None
    raise InvalidQueryError(f"unknown reference family {family!r}")
