"""
Interaction coefficients ``C_nmkl`` on resonant quartets ``n + m == k + l``.

Families
--------
szego
    ``C = 1``.
mrs
    ``C = 1 / (1 + (n+m+k+l)/2)``.
cf
    ``C = (1 + min(n,m,k,l)) / sqrt((1+n)(1+m)(1+k)(1+l))``.
lll
    ``C = ((n+m+k+l)/2)! / (2^(n+m) sqrt(n! m! k! l!))``.
modcf
    ``C = (1 + (n+m+k+l)/4) / sqrt((1+n)(1+m)(1+k)(1+l))``.
random
    Independent uniform ``[0, 1)`` draws, one per symmetry orbit of quartets.

Random draws come from the Philox4x64-10 counter-based generator with the
user seed as key and the canonical quartet as counter, so any coefficient
can be regenerated on its own without a stored table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import BlockRangeError

__all__ = [
    "FAMILIES",
    "CLOSED_FORM_FAMILIES",
    "Quartet",
    "CouplingProvider",
    "canonical_quartet",
    "symmetry_orbit",
    "coupling",
    "raw_coupling",
    "CouplingTable",
]

FAMILIES = ("szego", "mrs", "cf", "lll", "modcf", "random")
CLOSED_FORM_FAMILIES = ("szego", "mrs", "cf", "lll", "modcf")

_U64 = 2**64
_MAX_LOG = math.log(np.finfo(float).max)


class Quartet(NamedTuple):
    """Mode indices of ``a+_n a+_m a_k a_l``."""

    n: int
    m: int
    k: int
    l: int

    @property
    def is_resonant(self) -> bool:
        return self.n + self.m == self.k + self.l


def _check(q) -> Quartet:
    q = Quartet(*(int(i) for i in q))
    if min(q) < 0:
        raise BlockRangeError(f"mode indices must be nonnegative, got {tuple(q)}")
    if not q.is_resonant:
        raise ValueError(f"quartet {tuple(q)} violates n + m == k + l")
    return q


def canonical_quartet(q) -> Quartet:
    """Representative of the 8-element symmetry orbit of ``q``.

    Each pair is sorted, then the two pairs are ordered lexicographically.
    This is the lexicographic minimum of the orbit.
    """
    n, m, k, l = q
    a = (n, m) if n <= m else (m, n)
    b = (k, l) if k <= l else (l, k)
    if b < a:
        a, b = b, a
    return Quartet(a[0], a[1], b[0], b[1])


def symmetry_orbit(q) -> set[Quartet]:
    """All index permutations of ``q`` under which ``C`` is invariant."""
    n, m, k, l = q
    images = set()
    for a, b in (((n, m), (k, l)), ((k, l), (n, m))):
        for x in (a, a[::-1]):
            for y in (b, b[::-1]):
                images.add(Quartet(*x, *y))
    return images


def _lll(n, m, k, l) -> float:
    s = n + m
    log_c = (math.lgamma(s + 1) - s * math.log(2.0)
             - 0.5 * (math.lgamma(n + 1) + math.lgamma(m + 1)
                      + math.lgamma(k + 1) + math.lgamma(l + 1)))
    if not -_MAX_LOG < log_c < _MAX_LOG:
        raise BlockRangeError(f"lll coefficient for {(n, m, k, l)} is out of float range")
    return math.exp(log_c)


def _random_uniform(seed: int, q: Quartet) -> float:
    raw = np.random.Philox(key=seed % _U64, counter=list(q)).random_raw()
    return (int(raw) >> 11) * 2.0**-53


def raw_coupling(family: str, q, seed: int = 0) -> float:
    """Un-normalized coefficient of ``family`` on the resonant quartet ``q``."""
    # evaluate on the orbit representative so symmetry holds bit for bit
    n, m, k, l = q = canonical_quartet(_check(q))
    if family == "szego":
        return 1.0
    if family == "mrs":
        return 1.0 / (1.0 + (n + m + k + l) / 2.0)
    if family == "cf":
        return (1.0 + min(q)) / math.sqrt((1 + n) * (1 + m) * (1 + k) * (1 + l))
    if family == "lll":
        return _lll(n, m, k, l)
    if family == "modcf":
        return (1.0 + (n + m + k + l) / 4.0) / math.sqrt((1 + n) * (1 + m) * (1 + k) * (1 + l))
    if family == "random":
        return _random_uniform(seed, q)
    raise ValueError(f"unknown coupling family {family!r}; expected one of {FAMILIES}")


@dataclass(frozen=True)
class CouplingProvider:
    """A coupling family together with its seed and normalization choice.

    Parameters
    ----------
    family : str
        One of :data:`FAMILIES`.
    seed : int
        Key of the random family; ignored by the closed forms.
    normalize_c0000 : bool, optional
        Divide every coefficient by ``C_0000``.  Defaults to on for the
        random family and off otherwise (closed forms already have
        ``C_0000 == 1``).
    """

    family: str
    seed: int = 0
    normalize_c0000: bool | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown coupling family {self.family!r}; expected one of {FAMILIES}")
        if not 0 <= int(self.seed) < _U64:
            raise ValueError("seed must fit an unsigned 64-bit integer")
        if self.normalize_c0000 is None:
            object.__setattr__(self, "normalize_c0000", self.family == "random")

    @property
    def divisor(self) -> float:
        """Raw ``C_0000`` when normalizing, else 1."""
        if not self.normalize_c0000:
            return 1.0
        return raw_coupling(self.family, (0, 0, 0, 0), self.seed)

    def __call__(self, n, m, k, l) -> float:
        return coupling(self, (n, m, k, l))

    def describe(self) -> dict:
        return {"family": self.family, "seed": int(self.seed),
                "normalize_c0000": bool(self.normalize_c0000)}


def coupling(provider: CouplingProvider, q) -> float:
    """``C_nmkl`` for ``provider`` on the resonant quartet ``q``."""
    value = raw_coupling(provider.family, q, provider.seed)
    if provider.normalize_c0000:
        value /= provider.divisor
    return value


class CouplingTable:
    """Memo of one provider's coefficients keyed by canonical quartet."""

    def __init__(self, provider: CouplingProvider):
        self.provider = provider
        self._divisor = provider.divisor
        self._cache: dict[Quartet, float] = {}

    def fill(self, max_index: int):
        """Evaluate every canonical quartet with indices ``<= max_index``."""
        for total in range(2 * max_index + 1):
            pairs = [(a, total - a) for a in range(max(0, total - max_index), total // 2 + 1)]
            for i, p in enumerate(pairs):
                for r in pairs[i:]:
                    self(*p, *r)
        return self

    def __len__(self):
        return len(self._cache)

    def __call__(self, n, m, k, l) -> float:
        key = canonical_quartet((n, m, k, l))
        value = self._cache.get(key)
        if value is None:
            value = raw_coupling(self.provider.family, key, self.provider.seed) / self._divisor
            self._cache[key] = value
        return value
