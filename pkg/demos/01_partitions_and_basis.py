"""
Counting and listing Fock states
================================

A block (N, M) holds every way of placing N bosons in modes 0..M with total
mode index M.  Those are the partitions of M into at most N parts, so the
block dimension is the restricted partition number p_N(M).
"""

import numpy as np

from resonant import BlockLabel, asymptotic_count_fixed_n, count_partitions, enumerate_basis

# %%
# The smallest interesting blocks can be listed in full.  States come out
# in lexicographically decreasing order, read from mode M down to mode 0,
# and each one is printed as the occupation vector (n_0, ..., n_M).

basis = enumerate_basis((3, 4))
for i, state in enumerate(basis.states):
    print(i, state)

# %%
# Every state really lives in the block.
label = BlockLabel.of(3, 4)
modes = np.arange(label.m_level + 1)
for state in basis.states:
    occ = np.array(state)
    assert occ.sum() == label.n_particles and occ @ modes == label.m_level

# %%
# Dimensions grow quickly along the diagonal N = M, which is where the
# level statistics are studied.

for n in (10, 14, 18, 22, 27, 32):
    print(f"N = M = {n:2d}   dim = {count_partitions((n, n))}")

# %%
# For fixed N the count grows like M^(N-1) / (N! (N-1)!).  The ratio to the
# exact count creeps toward one.

for m in (50, 200, 1000, 5000):
    exact = count_partitions((3, m))
    print(f"p_3({m}) = {exact:9d}   asymptotic ratio {asymptotic_count_fixed_n((3, m)) / exact:.4f}")
