"""Diagonalization of Hamiltonian blocks and eigenvalue post-processing."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DiagonalizationError
from .hamiltonian import BlockMatrix
from .partitions import BlockLabel

__all__ = [
    "SOLVER_TOLERANCE",
    "SpectrumRecord",
    "DegeneracySummary",
    "InheritanceResult",
    "diagonalize",
    "spectrum_from_values",
    "max_eigenvalue",
    "integrality_deviation",
    "degeneracy_summary",
    "default_cluster_tolerance",
    "inheritance_check",
]

# residual bound per eigenpair, relative to ||H||_2
SOLVER_TOLERANCE = 1e-10


@dataclass(frozen=True)
class SpectrumRecord:
    """Sorted eigenvalues of one block.

    Attributes
    ----------
    label : BlockLabel or None
    family : str or None
    seed : int or None
    eigenvalues : ndarray
        Ascending, read-only.
    solver_tolerance : float
        Residual bound ``||Hv - Ev|| <= tol * ||H||`` the solver is held to.
    """

    label: BlockLabel | None
    family: str | None
    seed: int | None
    eigenvalues: np.ndarray = field(repr=False)
    solver_tolerance: float = SOLVER_TOLERANCE

    def __post_init__(self):
        values = np.sort(np.asarray(self.eigenvalues, dtype=float))
        values.setflags(write=False)
        object.__setattr__(self, "eigenvalues", values)

    def __len__(self):
        return len(self.eigenvalues)

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)


def spectrum_from_values(values, label=None, family=None, seed=None) -> SpectrumRecord:
    """Wrap an arbitrary collection of eigenvalues (sorted on the way in)."""
    return SpectrumRecord(label, family, seed, np.asarray(values, dtype=float))


def _residual_check(H, label, samples):
    w, v = np.linalg.eigh(H)
    norm = max(np.abs(w).max(), np.finfo(float).tiny)
    picks = np.unique(np.linspace(0, len(w) - 1, min(samples, len(w))).astype(int))
    for i in picks:
        r = np.linalg.norm(H @ v[:, i] - w[i] * v[:, i])
        if r > SOLVER_TOLERANCE * norm:
            raise DiagonalizationError(
                f"eigenpair {i} of block {label} has residual {r:.3g} > {SOLVER_TOLERANCE:g}*||H||")
    return w


def diagonalize(matrix, *, validate: bool = False, samples: int = 8) -> SpectrumRecord:
    """All eigenvalues of a symmetric block, ascending.

    Parameters
    ----------
    matrix : BlockMatrix or array_like
    validate : bool
        Also compute eigenvectors and check ``||Hv - Ev||`` on ``samples``
        evenly spaced eigenpairs.

    Raises
    ------
    ValueError
        If the matrix is not square and symmetric.
    DiagonalizationError
        If LAPACK fails to converge, or validation finds a bad residual.
    """
    if isinstance(matrix, BlockMatrix):
        H = matrix.entries
        label = matrix.label
        family, seed = matrix.provider.family, matrix.provider.seed
        if family != "random":
            seed = None
    else:
        H = np.asarray(matrix, dtype=float)
        label = family = seed = None
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {H.shape}")
    scale = max(np.abs(H).max(initial=0.0), 1.0)
    if not np.allclose(H, H.T, rtol=0.0, atol=1e-12 * scale):
        raise ValueError("matrix is not symmetric")
    try:
        if validate:
            w = _residual_check(H, label, samples)
        else:
            w = np.linalg.eigvalsh(H)
    except np.linalg.LinAlgError as exc:
        raise DiagonalizationError(f"eigensolver failed on block {label}: {exc}") from exc
    return SpectrumRecord(label, family, seed, w)


def max_eigenvalue(spec: SpectrumRecord) -> float:
    if len(spec) == 0:
        raise ValueError("empty spectrum")
    return float(spec.eigenvalues[-1])


def integrality_deviation(spec: SpectrumRecord) -> float:
    """Largest distance of an eigenvalue from the nearest integer."""
    E = spec.eigenvalues
    if len(E) == 0:
        return 0.0
    return float(np.abs(E - np.round(E)).max())


class DegeneracySummary(NamedTuple):
    clusters: list[tuple[float, int]]
    cluster_tolerance: float
    zero_multiplicity: int

    def multiplicity_of(self, value: float) -> int:
        for rep, mult in self.clusters:
            if abs(rep - value) <= self.cluster_tolerance:
                return mult
        return 0


def default_cluster_tolerance(spec: SpectrumRecord) -> float:
    E = spec.eigenvalues
    emax = abs(E[-1]) if len(E) else 0.0
    return 1e-8 * max(1.0, emax)


def degeneracy_summary(spec: SpectrumRecord, tol: float | None = None) -> DegeneracySummary:
    """Single-linkage clusters of the sorted spectrum.

    Neighbouring eigenvalues closer than ``tol`` share a cluster; each
    cluster is reported by its mean and size.  ``tol`` defaults to
    ``1e-8 * max(1, |E_max|)``.
    """
    if tol is None:
        tol = default_cluster_tolerance(spec)
    if tol <= 0:
        raise ValueError("cluster tolerance must be positive")
    E = spec.eigenvalues
    if len(E) == 0:
        return DegeneracySummary([], tol, 0)
    breaks = np.flatnonzero(np.diff(E) > tol) + 1
    clusters = [(float(chunk.mean()), len(chunk)) for chunk in np.split(E, breaks)]
    zero = next((mult for rep, mult in clusters if abs(rep) <= tol), 0)
    return DegeneracySummary(clusters, tol, zero)


class InheritanceResult(NamedTuple):
    inherited: bool
    unmatched: list[float]

    def __bool__(self):
        return self.inherited


def inheritance_check(spec_small: SpectrumRecord, spec_large: SpectrumRecord,
                      tol: float = 1e-8) -> InheritanceResult:
    """Whether every eigenvalue of ``spec_small`` reappears in ``spec_large``.

    Greedy two-pointer matching over the two sorted spectra; each eigenvalue
    of the larger block is used at most once.  Near-degenerate crossings can
    defeat greedy matching, so unmatched values are returned for inspection.
    """
    small, large = spec_small.eigenvalues, spec_large.eigenvalues
    unmatched = []
    j = 0
    for e in small:
        while j < len(large) and large[j] < e - tol:
            j += 1
        if j < len(large) and abs(large[j] - e) <= tol:
            j += 1
        else:
            unmatched.append(float(e))
    return InheritanceResult(not unmatched, unmatched)
