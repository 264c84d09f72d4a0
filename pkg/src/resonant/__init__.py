"""
Quantum resonant systems: block-diagonal Hamiltonians with couplings on
resonant mode quartets, their exact (N, M)-block spectra, and the level
statistics that separate solvable coupling families from chaotic ones.
"""

from .couplings import (CLOSED_FORM_FAMILIES, FAMILIES, CouplingProvider, Quartet,
                        canonical_quartet, coupling)
from .errors import (BlockRangeError, BlockSizeError, DegenerateSpectrumError,
                     DiagonalizationError, ResonantError, UnfoldingWindowError,
                     UnsupportedFamilyError)
from .hamiltonian import BlockMatrix, apply_quartet, assemble_block
from .oracles import expected_max_eigenvalue, two_particle_matrix, two_particle_spectrum
from .partitions import (BasisIndex, BlockLabel, asymptotic_count_fixed_n,
                         asymptotic_count_total, count_partitions, enumerate_basis)
from .spectra import (SpectrumRecord, degeneracy_summary, diagonalize, inheritance_check,
                      integrality_deviation, max_eigenvalue)
from .statistics import (classify_spacings, fit_gumbel, normalized_eigenvalue_histogram,
                         reference_density, spacing_histogram, unfold)

__version__ = "0.1.0"
