"""
Level spacings: Poisson or Wigner
=================================

Unfold each spectrum with a local window of half-width round(sqrt(dim)),
then compare the spacing distribution with the Poisson law exp(-s) and
the Wigner surmise by Kolmogorov-Smirnov distance.  Integrable families
should look Poisson and chaotic ones Wigner.
"""

import numpy as np

from resonant import CouplingProvider, assemble_block, diagonalize
from resonant import statistics as st

SIZE = 22  # dim 1002; the full-size figure uses 27 (dim 3010)

# %%
# Four systems, one verdict each.
for family, seed in [("cf", 0), ("lll", 0), ("modcf", 0), ("random", 1)]:
    spec = diagonalize(assemble_block((SIZE, SIZE), CouplingProvider(family, seed)))
    cls, unfolded = st.spacing_statistics(spec)
    print(f"{family:7s} KS poisson {cls.ks_poisson:.3f}  KS wigner {cls.ks_wigner:.3f}"
          f"  -> {cls.verdict}")

# %%
# A text histogram of the modcf spacings against both references.
spec = diagonalize(assemble_block((SIZE, SIZE), CouplingProvider("modcf")))
_, unfolded = st.spacing_statistics(spec)
hist = st.spacing_histogram(unfolded)
for left, right, density in hist.rows()[:16]:
    s = 0.5 * (left + right)
    print(f"{s:5.2f} {density:6.3f} {'#' * int(40 * density):40s}"
          f" P {st.reference_density('poisson', s):.3f} W {st.reference_density('wigner', s):.3f}")

# %%
# Szego is different: most gaps vanish, so spacing statistics say nothing.
# Its normalized eigenvalue density is instead close to a Gumbel law.
spec = diagonalize(assemble_block((SIZE, SIZE), CouplingProvider("szego")))
cls, _ = st.spacing_statistics(spec)
print("szego verdict", cls.verdict, "degenerate fraction", round(cls.degenerate_fraction, 3))
x = spec.eigenvalues / spec.eigenvalues[-1]
g = st.fit_gumbel(x)
h = st.normalized_eigenvalue_histogram(spec)
mean, std = st.fit_gaussian(x)
print("gumbel mu", round(g.mu, 4), "beta", round(g.beta, 4))
print("L2 to gumbel", round(st.l2_distance(h, lambda t: st.gumbel_pdf(t, g)), 3),
      "L2 to gaussian", round(st.l2_distance(h, lambda t: st.gaussian_pdf(t, mean, std)), 3))
