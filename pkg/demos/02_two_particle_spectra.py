"""
Two particles: exact spectra
============================

With N = 2 and odd M = 2m + 1 the block is spanned by m + 1 pair states
|I, M - I>, and the Hamiltonian reduces to the small matrix 2 C_{I,M-I,J,M-J}.
Several coupling families give it in closed form.  Here the general
assembly code is checked against those results.
"""

import numpy as np

from resonant import CouplingProvider, assemble_block, diagonalize
from resonant.oracles import two_particle_matrix, two_particle_spectrum

M = 9

# %%
# The assembled block equals the reduced pair-state matrix exactly.
for family in ("szego", "mrs", "cf", "lll"):
    provider = CouplingProvider(family)
    H = assemble_block((2, M), provider).entries
    print(family, "max |H - H_pair| =", np.abs(H - two_particle_matrix(provider, M)).max())

# %%
# Szego: one eigenvalue M + 1 and the rest zero.  The mrs and lll families
# keep the zeros but push the single nonzero level to 1.
for family in ("szego", "mrs", "lll"):
    E = diagonalize(assemble_block((2, M), CouplingProvider(family))).eigenvalues
    print(family, np.round(E, 12))

# %%
# CF is more interesting: the levels are 1 / ((I + 1)(2I + 1)).
E = diagonalize(assemble_block((2, M), CouplingProvider("cf"))).eigenvalues
exact = two_particle_spectrum("cf", M)
for numeric, fraction in zip(E, exact.exact):
    print(f"{numeric:.15f}   {fraction}")
