"""
Patterns in the solvable families
=================================

Beyond two particles the solvable couplings still leave fingerprints: the
Szego spectrum is integer, the maximal eigenvalue follows a simple formula,
and CF spectra of smaller blocks reappear inside larger ones.
"""

import numpy as np

from resonant import (CouplingProvider, assemble_block, degeneracy_summary, diagonalize,
                      inheritance_check, integrality_deviation)
from resonant.oracles import expected_max_eigenvalue


def spectrum(family, n, m):
    return diagonalize(assemble_block((n, m), CouplingProvider(family)))

# %%
# Szego: integer eigenvalues, many of them repeated.
spec = spectrum("szego", 6, 10)
print("dim", spec.dim, "integrality deviation", integrality_deviation(spec))
summary = degeneracy_summary(spec)
print("distinct levels", len(summary.clusters), "zero multiplicity", summary.zero_multiplicity)
print("E_max", spec.eigenvalues[-1], "formula", expected_max_eigenvalue("szego", (6, 10)))

# %%
# For mrs, cf and lll the top level is N(N-1)/2 whatever M is.
for family in ("mrs", "cf", "lll"):
    tops = [spectrum(family, 5, m).eigenvalues[-1] for m in range(0, 11, 2)]
    print(family, np.round(tops, 10))

# %%
# CF inheritance: the N = 4 spectrum at M = 6 sits inside the M = 10 one.
small, large = spectrum("cf", 4, 6), spectrum("cf", 4, 10)
result = inheritance_check(small, large)
print(f"{small.dim} levels of M=6 inside {large.dim} levels of M=10:", bool(result))

# %%
# The modified coupling modcf breaks this structure.
result = inheritance_check(spectrum("modcf", 4, 6), spectrum("modcf", 4, 10))
print("modcf inherited:", bool(result), "unmatched:", len(result.unmatched))
