"""
Fock bases of (N, M)-blocks.

A block collects all occupation vectors ``(n_0, ..., n_M)`` with
``sum(n_k) == N`` and ``sum(k * n_k) == M``.  Dropping ``n_0``, such a vector
is an integer partition of ``M`` into at most ``N`` parts (``n_k`` copies of
the part ``k``), so the block dimension is ``p_N(M)``.

Basis states are ordered canonically: occupation vectors compared
lexicographically from the highest mode ``M`` down to mode ``0``, largest
first.  Any ordering gives the same spectrum; this one is cheap to produce
and stable, which keeps CSV artifacts reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import BlockRangeError

__all__ = [
    "BlockLabel",
    "BasisIndex",
    "count_partitions",
    "enumerate_basis",
    "iter_fock_states",
    "asymptotic_count_fixed_n",
    "asymptotic_count_total",
    "INT64_MAX",
]

INT64_MAX = 2**63 - 1

# The counting table is O(min(N, M) * M); beyond this we refuse instead of
# grinding.  Every M <= 400 block sits well below it.
_MAX_TABLE_CELLS = 10**7


class BlockLabel(NamedTuple):
    """Eigenvalues ``(N, M)`` of the particle-number and level operators."""

    n_particles: int
    m_level: int

    @classmethod
    def of(cls, n, m) -> "BlockLabel":
        n, m = int(n), int(m)
        if n < 0 or m < 0:
            raise BlockRangeError(f"block labels must be nonnegative, got N={n}, M={m}")
        return cls(n, m)

    def __str__(self):
        return f"(N={self.n_particles}, M={self.m_level})"


def _as_label(label) -> BlockLabel:
    if isinstance(label, BlockLabel):
        if label.n_particles < 0 or label.m_level < 0:
            raise BlockRangeError(f"block labels must be nonnegative, got {tuple(label)}")
        return label
    return BlockLabel.of(*label)


def _partition_row(n: int, m: int) -> list[int]:
    """Return ``[p_n(0), ..., p_n(m)]`` via ``p_n(j) = p_{n-1}(j) + p_n(j - n)``."""
    row = [1] + [0] * m  # p_0(j)
    for parts in range(1, n + 1):
        for j in range(parts, m + 1):
            row[j] += row[j - parts]
    return row


def count_partitions(label) -> int:
    """Number of partitions of ``M`` into at most ``N`` parts.

    Parameters
    ----------
    label : BlockLabel or (int, int)
        Block ``(N, M)``.

    Returns
    -------
    int
        ``p_N(M)``, the dimension of the block.

    Raises
    ------
    BlockRangeError
        If the count would not fit a signed 64-bit integer, or the counting
        table would be unreasonably large.
    """
    n, m = _as_label(label)
    n = min(n, m)  # a partition of M has at most M parts
    if m > 400 and n * m > _MAX_TABLE_CELLS:
        raise BlockRangeError(f"block {label} is outside the supported counting range")
    count = _partition_row(n, m)[m]
    if count > INT64_MAX:
        raise BlockRangeError(f"p_N(M) for {tuple(label)} exceeds the 64-bit range")
    return count


def iter_fock_states(label) -> Iterator[tuple[int, ...]]:
    """Yield the occupation vectors of a block in canonical order.

    Recursive descent over the largest part: the count of part ``M`` is
    fixed first (largest first), then part ``M - 1``, and so on down to 1.
    Whatever particles remain sit in mode 0.
    """
    n, m = _as_label(label)
    if m == 0:
        yield (n,)
        return
    if n == 0:
        return
    occ = [0] * (m + 1)

    def descend(part, remaining, slots):
        if remaining == 0:
            occ[0] = n - sum(occ[1:])
            yield tuple(occ)
            occ[0] = 0
            return
        if part == 0 or remaining > part * slots:
            return
        for count in range(min(remaining // part, slots), -1, -1):
            occ[part] = count
            yield from descend(part - 1, remaining - count * part, slots - count)
        occ[part] = 0

    yield from descend(m, m, n)


@dataclass(frozen=True)
class BasisIndex:
    """Ordered Fock basis of one block with an exact reverse lookup.

    Attributes
    ----------
    label : BlockLabel
    states : tuple of tuple of int
        Occupation vectors, each of length ``M + 1``.
    lookup : mapping
        Occupation vector -> position in ``states``.
    """

    label: BlockLabel
    states: tuple[tuple[int, ...], ...]
    lookup: Mapping[tuple[int, ...], int] = field(repr=False, compare=False)

    @classmethod
    def from_states(cls, label, states: Iterable[Sequence[int]]) -> "BasisIndex":
        """Build an index over ``states`` in the given order.

        The order is not required to be canonical, which lets callers check
        that nothing downstream depends on it.
        """
        label = _as_label(label)
        states = tuple(tuple(int(x) for x in s) for s in states)
        lookup = {s: i for i, s in enumerate(states)}
        if len(lookup) != len(states):
            raise ValueError("basis states must be pairwise distinct")
        n, m = label
        for s in states:
            if len(s) != m + 1 or sum(s) != n or sum(k * c for k, c in enumerate(s)) != m:
                raise ValueError(f"state {s} does not belong to block {label}")
        return cls(label, states, lookup)

    def __len__(self):
        return len(self.states)

    def __getitem__(self, i):
        return self.states[i]

    def __iter__(self):
        return iter(self.states)

    def index(self, state: Sequence[int]) -> int:
        return self.lookup[tuple(state)]


def enumerate_basis(label) -> BasisIndex:
    """Canonically ordered Fock basis of the block ``label``."""
    label = _as_label(label)
    count_partitions(label)  # range check before allocating anything
    states = tuple(iter_fock_states(label))
    return BasisIndex(label, states, {s: i for i, s in enumerate(states)})


def asymptotic_count_fixed_n(label) -> float:
    """Large-``M`` estimate ``M^(N-1) / (N! (N-1)!)`` of ``p_N(M)`` at fixed ``N``."""
    n, m = _as_label(label)
    if m < 1:
        raise ValueError("asymptotic count needs M >= 1")
    if n < 1:
        return 0.0
    log_value = (n - 1) * math.log(m) - math.lgamma(n + 1) - math.lgamma(n)
    return math.exp(log_value)


def asymptotic_count_total(m: int) -> float:
    """Leading Hardy-Ramanujan term ``exp(pi sqrt(2m/3)) / (4 m sqrt(3))`` for ``p(m)``."""
    if m < 1:
        raise ValueError("asymptotic count needs m >= 1")
    return math.exp(math.pi * math.sqrt(2.0 * m / 3.0)) / (4.0 * m * math.sqrt(3.0))
