"""
Matrix of the resonant Hamiltonian

    H = 1/2 * sum_{n+m=k+l} C_nmkl a+_n a+_m a_k a_l

restricted to one (N, M)-block of the Fock basis.

Assembly walks the source states.  For each one it loops over unordered
annihilation pairs ``k <= l`` drawn from the occupied modes, then over
unordered creation pairs ``n <= m`` with ``n + m == k + l``.  Each unordered
term stands for ``mult(k, l) * mult(n, m)`` ordered terms of the sum, where
``mult`` is 2 for distinct indices and 1 otherwise.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .couplings import CouplingProvider, CouplingTable
from .errors import BlockSizeError
from .partitions import BasisIndex, BlockLabel, count_partitions, enumerate_basis

__all__ = [
    "DEFAULT_DIM_CAP",
    "BlockMatrix",
    "apply_quartet",
    "assemble_block",
    "column_entries",
    "to_triplets",
    "nonzero_fraction",
]

DEFAULT_DIM_CAP = 20000


@dataclass(frozen=True)
class BlockMatrix:
    """Dense real symmetric Hamiltonian block.

    Attributes
    ----------
    label : BlockLabel
    basis : BasisIndex
        Row/column ordering of ``entries``.
    entries : ndarray, shape (dim, dim)
    provider : CouplingProvider
    """

    label: BlockLabel
    basis: BasisIndex
    entries: np.ndarray
    provider: CouplingProvider

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


def apply_quartet(state: Sequence[int], q) -> tuple[tuple[int, ...], float] | None:
    """Act with ``a+_n a+_m a_k a_l`` on the Fock state ``state``.

    Returns the image occupation vector and its amplitude, or ``None`` when
    an annihilation operator hits an empty mode.  Creation indices beyond
    the end of ``state`` are not representable and raise ``IndexError``.
    """
    n, m, k, l = q
    occ = list(state)
    amp = 1.0
    for mode in (l, k):
        if occ[mode] == 0:
            return None
        amp *= math.sqrt(occ[mode])
        occ[mode] -= 1
    for mode in (m, n):
        occ[mode] += 1
        amp *= math.sqrt(occ[mode])
    return tuple(occ), amp


def column_entries(state: Sequence[int], lookup, coupling) -> dict[int, float]:
    """Nonzero entries ``{i: <v_i|H|state>}`` of the column of ``state``.

    ``coupling`` is any callable ``(n, m, k, l) -> C_nmkl`` respecting the
    index symmetries.  Contributions are accumulated in a fixed loop order.
    """
    occ = list(state)
    occupied = [mode for mode, c in enumerate(occ) if c]
    out: dict[int, float] = {}
    for a, k in enumerate(occupied):
        for l in occupied[a:]:
            ck = occ[k]
            if k == l:
                if ck < 2:
                    continue
                ann = math.sqrt(ck * (ck - 1))
                mult_ann = 1
            else:
                ann = math.sqrt(ck * occ[l])
                mult_ann = 2
            occ[k] -= 1
            occ[l] -= 1
            s = k + l
            for n in range(s // 2 + 1):
                m = s - n
                cm = occ[m] + 1
                occ[m] = cm
                cn = occ[n] + 1
                occ[n] = cn
                amp = ann * math.sqrt(cm * cn)
                mult = mult_ann * (1 if n == m else 2)
                i = lookup[tuple(occ)]
                out[i] = out.get(i, 0.0) + 0.5 * mult * coupling(n, m, k, l) * amp
                occ[n] -= 1
                occ[m] -= 1
            occ[k] += 1
            occ[l] += 1
    return out


def _thread_count(threads):
    if threads is None:
        threads = int(os.environ.get("RESONANT_THREADS", "1") or 1)
    return max(1, int(threads))


def assemble_block(label, provider: CouplingProvider, *, basis: BasisIndex | None = None,
                   mirror: bool = True, threads: int | None = None,
                   dim_cap: int | None = DEFAULT_DIM_CAP) -> BlockMatrix:
    """Assemble the Hamiltonian matrix of one block.

    Parameters
    ----------
    label : BlockLabel or (int, int)
    provider : CouplingProvider
    basis : BasisIndex, optional
        Basis to use instead of the canonical one (any order).
    mirror : bool
        If true (default) only the lower triangle is computed, each entry
        from the action on the column state, and then copied to the upper
        triangle, so the result is exactly symmetric.  If false every
        column is evaluated independently.
    threads : int, optional
        Worker threads over columns.  Defaults to ``$RESONANT_THREADS`` or
        1.  The result does not depend on this value.
    dim_cap : int or None
        Refuse blocks larger than this.
    """
    label = BlockLabel.of(*label)
    dim = count_partitions(label)
    if dim_cap is not None and dim > dim_cap:
        raise BlockSizeError(f"block {label} has dimension {dim} > cap {dim_cap}")
    if basis is None:
        basis = enumerate_basis(label)
    elif basis.label != label or len(basis) != dim:
        raise ValueError(f"basis does not span block {label}")

    table = CouplingTable(provider)
    table.fill(label.m_level)  # workers then only read the memo

    def column(j):
        return column_entries(basis.states[j], basis.lookup, table)

    workers = _thread_count(threads)
    if workers == 1 or dim < 64:
        columns = [column(j) for j in range(dim)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            columns = list(pool.map(column, range(dim)))

    H = np.zeros((dim, dim))
    for j, col in enumerate(columns):
        for i, value in col.items():
            if mirror:
                if i >= j:
                    H[i, j] = value
                    H[j, i] = value
            else:
                H[i, j] = value
    return BlockMatrix(label, basis, H, provider)


def to_triplets(matrix: BlockMatrix):
    """Lower-triangle ``(rows, cols, values)`` of the nonzero entries."""
    rows, cols = np.nonzero(np.tril(matrix.entries))
    return rows, cols, matrix.entries[rows, cols]


def nonzero_fraction(matrix: BlockMatrix) -> float:
    return float(np.count_nonzero(matrix.entries)) / matrix.entries.size
