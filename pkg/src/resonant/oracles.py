"""
Closed-form reference results.

Two-particle blocks ``(2, M)`` with ``M = 2m + 1`` have the basis
``v_I = |n_I = 1, n_{M-I} = 1>``, ``I = 0..m``, and matrix elements
``H_IJ = 2 C_{I, M-I, J, M-J}``.  For the solvable families the spectrum is
known exactly; maximal eigenvalues of larger blocks follow simple formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .couplings import CouplingProvider, coupling
from .errors import UnsupportedFamilyError
from .partitions import BlockLabel

__all__ = [
    "TwoParticleSpectrum",
    "two_particle_basis",
    "two_particle_matrix",
    "two_particle_spectrum",
    "expected_max_eigenvalue",
    "VerificationCase",
    "SUITES",
    "verify_two_particle",
    "verify_emax",
    "verify_integer",
    "verify_inheritance",
]

_SOLVABLE = ("mrs", "cf", "lll")


@dataclass(frozen=True)
class TwoParticleSpectrum:
    """Exact two-particle eigenvalues; ``exact`` holds Fractions, ascending."""

    family: str
    m_level: int
    exact: tuple[Fraction, ...]

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([float(x) for x in self.exact])

    def __len__(self):
        return len(self.exact)


def two_particle_basis(M: int) -> list[tuple[int, ...]]:
    """Occupation vectors of ``v_I`` for ``I = 0..floor(M/2)``."""
    states = []
    for I in range(M // 2 + 1):
        occ = [0] * (M + 1)
        occ[I] += 1
        occ[M - I] += 1
        states.append(tuple(occ))
    return states


def two_particle_matrix(provider: CouplingProvider, M: int) -> np.ndarray:
    """``H_IJ = 2 C_{I, M-I, J, M-J}`` on the ``v_I`` basis.

    For even ``M`` the last state ``I = M/2`` is doubly occupied; its
    normalization puts a factor ``1/sqrt(2)`` on its row and column.
    """
    if M < 1:
        raise ValueError("two-particle blocks need M >= 1")
    size = M // 2 + 1
    weight = np.ones(size)
    if M % 2 == 0:
        weight[-1] = np.sqrt(0.5)
    H = np.empty((size, size))
    for I in range(size):
        for J in range(size):
            H[I, J] = 2.0 * coupling(provider, (I, M - I, J, M - J)) * weight[I] * weight[J]
    return H


def two_particle_spectrum(family: str, M: int) -> TwoParticleSpectrum:
    """Exact spectrum of the two-particle block for odd ``M``.

    szego: ``m`` zeros and ``M + 1``; mrs and lll: ``m`` zeros and 1;
    cf: ``1 / ((I + 1)(2I + 1))`` for ``I = 0..m``.
    """
    if M < 1 or M % 2 == 0:
        raise ValueError("closed forms are tabulated for odd M only")
    m = (M - 1) // 2
    if family == "szego":
        values = [Fraction(0)] * m + [Fraction(M + 1)]
    elif family in ("mrs", "lll"):
        values = [Fraction(0)] * m + [Fraction(1)]
    elif family == "cf":
        values = [Fraction(1, (I + 1) * (2 * I + 1)) for I in range(m + 1)]
    else:
        raise UnsupportedFamilyError(f"no two-particle closed form for family {family!r}")
    return TwoParticleSpectrum(family, M, tuple(sorted(values)))


def expected_max_eigenvalue(family: str, label) -> float:
    """``(N-1)(N+2M)/2`` for szego, ``N(N-1)/2`` for mrs, cf and lll."""
    n, m = BlockLabel.of(*label)
    if family == "szego":
        return (n - 1) * (n + 2 * m) / 2
    if family in _SOLVABLE:
        return n * (n - 1) / 2
    raise UnsupportedFamilyError(f"no maximal-eigenvalue formula for family {family!r}")


class VerificationCase(NamedTuple):
    name: str
    passed: bool
    detail: str


SUITES = ("two-particle", "emax", "integer", "inheritance")


def _numeric_spectrum(family, label, seed=0):
    # deferred: the oracles stay importable without the assembly machinery
    from .hamiltonian import assemble_block
    from .spectra import diagonalize
    return diagonalize(assemble_block(label, CouplingProvider(family, seed)))


def verify_two_particle(max_m: int = 25, families=("szego", "mrs", "cf", "lll"),
                        tol: float = 1e-10) -> list[VerificationCase]:
    cases = []
    for family in families:
        for M in range(1, max_m + 1, 2):
            numeric = _numeric_spectrum(family, (2, M)).eigenvalues
            exact = two_particle_spectrum(family, M).eigenvalues
            err = float(np.abs(numeric - exact).max())
            cases.append(VerificationCase(f"two-particle {family} M={M}", err <= tol,
                                          f"max |E - E_exact| = {err:.3g}"))
    return cases


def verify_emax(max_n: int = 12, max_m: int = 12, families=("szego", "mrs", "cf", "lll"),
                tol: float = 1e-8) -> list[VerificationCase]:
    cases = []
    for family in families:
        for n in range(1, max_n + 1):
            for m in range(max_m + 1):
                numeric = float(_numeric_spectrum(family, (n, m)).eigenvalues[-1])
                expected = expected_max_eigenvalue(family, (n, m))
                err = abs(numeric - expected)
                cases.append(VerificationCase(f"emax {family} N={n} M={m}", err <= tol,
                                              f"E_max = {numeric!r}, expected {expected!r}"))
    return cases


def verify_integer(max_n: int = 12, max_m: int = 12, tol: float = 1e-8) -> list[VerificationCase]:
    cases = []
    for n in range(1, max_n + 1):
        for m in range(max_m + 1):
            E = _numeric_spectrum("szego", (n, m)).eigenvalues
            dev = float(np.abs(E - np.round(E)).max())
            cases.append(VerificationCase(f"integer szego N={n} M={m}", dev <= tol,
                                          f"max distance to integer = {dev:.3g}"))
    return cases


def verify_inheritance(n: int = 4, m_values=(4, 6, 8, 10), family: str = "cf",
                       tol: float = 1e-8) -> list[VerificationCase]:
    from .spectra import inheritance_check

    spectra = {m: _numeric_spectrum(family, (n, m)) for m in m_values}
    cases = []
    ms = sorted(m_values)
    for i, small in enumerate(ms):
        for large in ms[i + 1:]:
            result = inheritance_check(spectra[small], spectra[large], tol)
            cases.append(VerificationCase(
                f"inheritance {family} N={n} M={small} in M={large}", result.inherited,
                f"{len(result.unmatched)} unmatched"))
    return cases
