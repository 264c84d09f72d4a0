import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as hst
from scipy import integrate, stats as sps

from resonant import statistics as st
from resonant.couplings import CouplingProvider
from resonant.errors import DegenerateSpectrumError, UnfoldingWindowError
from resonant.hamiltonian import assemble_block
from resonant.spectra import diagonalize, spectrum_from_values


def block_spectrum(family, size, seed=0):
    return diagonalize(assemble_block((size, size), CouplingProvider(family, seed)))


# -- histograms ---------------------------------------------------------------

def test_constant_spectrum_single_bin():
    h = st.normalized_eigenvalue_histogram(spectrum_from_values([2.5] * 50))
    assert np.count_nonzero(h.densities) == 1
    assert h.total_probability == pytest.approx(1.0, abs=1e-12)


def test_uniform_grid_is_flat():
    dim = 400
    h = st.normalized_eigenvalue_histogram(spectrum_from_values(np.arange(1, dim + 1) / dim))
    assert len(h.densities) == math.ceil(dim / 20)
    np.testing.assert_allclose(h.densities, 1.0, atol=0.06)


def test_nonpositive_emax_is_rejected():
    with pytest.raises(DegenerateSpectrumError):
        st.normalized_eigenvalue_histogram(spectrum_from_values([-2.0, -1.0, 0.0]))


@pytest.mark.parametrize("mode", ["equal-width", "equal-count"])
def test_histogram_normalization(mode):
    rng = np.random.default_rng(0)
    for n in (10, 137, 2000):
        x = rng.normal(size=n)
        h = st.histogram(x, x.min(), x.max(), mode=mode)
        assert h.total_probability == pytest.approx(1.0, abs=1e-12)
        assert h.mode == mode
    h = st.histogram(np.arange(100.0), 0, 99, delta=10, mode="equal-count")
    np.testing.assert_allclose(h.densities * h.widths, 0.1, atol=1e-12)


def test_spacing_histogram_examples():
    h = st.spacing_histogram(np.ones(400))
    assert np.count_nonzero(h.densities) == 1
    assert h.bin_edges[0] == 0 and h.bin_edges[-1] == 4.0
    rng = np.random.default_rng(1)
    h = st.spacing_histogram(rng.exponential(size=5000))
    assert np.argmax(h.densities) == 0
    assert h.total_probability == pytest.approx(1.0, abs=1e-12)


def test_modcf_histogram_closer_to_wigner():
    cls, unfolded = st.spacing_statistics(block_spectrum("modcf", 23))
    h = st.spacing_histogram(unfolded)
    d_w = st.l2_distance(h, lambda s: st.reference_density("wigner", s))
    d_p = st.l2_distance(h, lambda s: st.reference_density("poisson", s))
    assert d_w < d_p


# -- Gumbel ------------------------------------------------------------------

def test_gumbel_recovery_from_samples():
    samples = np.random.default_rng(2024).gumbel(0.3, 0.1, size=100_000)
    g = st.fit_gumbel(samples)
    assert g.mu == pytest.approx(0.3, rel=0.02)
    assert g.beta == pytest.approx(0.1, rel=0.02)


def test_gumbel_fit_from_histogram():
    samples = np.random.default_rng(5).gumbel(1.0, 0.5, size=50_000)
    h = st.histogram(samples, samples.min(), samples.max())
    g = st.fit_gumbel(h)
    assert g.mu == pytest.approx(1.0, rel=0.03)
    assert g.beta == pytest.approx(0.5, rel=0.03)


def test_gumbel_pdf_integrates_to_one():
    g = st.GumbelParams(0.4, 0.07)
    total, _ = integrate.quad(lambda x: st.gumbel_pdf(x, g), -1, 3, points=[0.4])
    assert total == pytest.approx(1.0, abs=1e-8)


def test_degenerate_fits():
    with pytest.raises(DegenerateSpectrumError):
        st.fit_gumbel(np.full(20, 0.5))
    with pytest.raises(ValueError):
        st.fit_gumbel(np.arange(5.0))


def test_szego_gumbel_beats_gaussian():
    spec = block_spectrum("szego", 23)
    x = spec.eigenvalues / spec.eigenvalues[-1]
    h = st.normalized_eigenvalue_histogram(spec)
    g = st.fit_gumbel(x)
    mean, std = st.fit_gaussian(x)
    assert st.l2_distance(h, lambda t: st.gumbel_pdf(t, g)) < \
        st.l2_distance(h, lambda t: st.gaussian_pdf(t, mean, std))


# -- unfolding ---------------------------------------------------------------

def test_equally_spaced_unfolds_to_ones():
    u = st.unfold(np.arange(100.0))
    assert u.delta == 10
    assert len(u) == 100 - 2 * 10
    np.testing.assert_allclose(u.values, 1.0, rtol=1e-14)


def test_unfold_hand_example():
    E = [0, 1, 3, 6, 10, 15, 21, 28, 36, 45]
    # (E[I+1] - E[I]) / (E[I+2] - E[I-2]) for I = 3..8, 1-based
    raw = [Fraction(E[i] - E[i - 1], E[i + 1] - E[i - 3]) for i in range(3, 9)]
    mean = sum(raw) / len(raw)
    expected = [float(r / mean) for r in raw]
    u = st.unfold(E, delta=2)
    np.testing.assert_allclose(u.values, expected, rtol=1e-14)
    assert u.values.mean() == pytest.approx(1.0, abs=1e-12)


def test_unfold_window_error():
    E = [0.0] * 10 + list(range(1, 20))
    with pytest.raises(UnfoldingWindowError) as info:
        st.unfold(E, delta=2)
    assert info.value.index == 3


def test_unfold_too_short():
    with pytest.raises(ValueError):
        st.unfold([0.0, 1.0, 2.0], delta=2)


def test_szego_overpopulation_is_flagged():
    spec = block_spectrum("szego", 18)
    assert st.degenerate_fraction(spec) > 0.5
    cls, unfolded = st.spacing_statistics(spec)
    assert cls.verdict == "inconclusive" and unfolded is None
    assert cls.degenerate_fraction > 0.5


# spectra built from resolvable positive gaps
spectra_strategy = hst.tuples(
    hst.floats(-100, 100),
    hst.lists(hst.floats(1e-3, 10.0), min_size=12, max_size=80),
)


@settings(max_examples=80, deadline=None)
@given(spectra_strategy, hst.floats(1e-3, 1e3), hst.floats(-1e3, 1e3))
def test_unfold_invariances(spectrum, scale, shift):
    start, gaps = spectrum
    E = start + np.concatenate([[0.0], np.cumsum(gaps)])
    base = st.unfold(E)
    assert base.values.mean() == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(st.unfold(scale * E).values, base.values, rtol=1e-9, atol=1e-12)
    np.testing.assert_allclose(st.unfold(E + shift).values, base.values, rtol=1e-9, atol=1e-9)


def test_unfold_shift_invariance_tight():
    E = np.sort(np.random.default_rng(3).uniform(0, 1, 500))
    base = st.unfold(E).values
    np.testing.assert_allclose(st.unfold(E + 0.37).values, base, rtol=0, atol=1e-12)


# -- references and KS -------------------------------------------------------

def test_reference_densities():
    assert st.reference_density("poisson", 0.0) == 1.0
    assert st.reference_density("wigner", 0.0) == 0.0
    for kind in ("poisson", "wigner"):
        mass, _ = integrate.quad(lambda s: st.reference_density(kind, s), 0, 20)
        mean, _ = integrate.quad(lambda s: s * st.reference_density(kind, s), 0, 20)
        assert mass == pytest.approx(1.0, abs=1e-6)
        assert mean == pytest.approx(1.0, abs=1e-6)
        for s in (0.3, 1.0, 2.5):
            cdf, _ = integrate.quad(lambda t: st.reference_density(kind, t), 0, s)
            assert st.reference_cdf(kind, s) == pytest.approx(cdf, abs=1e-12)
    with pytest.raises(ValueError):
        st.reference_density("goe", 1.0)


def _ks_brute(samples, cdf):
    x = sorted(samples)
    n = len(x)
    worst = 0.0
    for v in x:
        below = sum(1 for y in x if y < v) / n
        at = sum(1 for y in x if y <= v) / n
        worst = max(worst, abs(at - cdf(v)), abs(below - cdf(v)))
    return worst


@pytest.mark.parametrize("kind", ["poisson", "wigner"])
def test_ks_against_brute_force(kind):
    rng = np.random.default_rng(7)
    cdf = lambda s: st.reference_cdf(kind, s)
    for n in (1, 5, 30, 200):
        x = rng.exponential(size=n)
        assert st.ks_statistic(x, cdf) == pytest.approx(_ks_brute(x, cdf), abs=1e-14)
    ties = [1.0, 1.0, 1.0, 2.0]
    assert st.ks_statistic(ties, cdf) == pytest.approx(_ks_brute(ties, cdf), abs=1e-14)
    x = rng.exponential(size=300)
    assert st.ks_statistic(x, cdf) == pytest.approx(sps.kstest(x, cdf).statistic, abs=1e-14)


# -- classification ----------------------------------------------------------

def test_synthetic_poisson_classification():
    s = np.random.default_rng(11).exponential(size=10_000)
    c = st.classify_spacings(s)
    assert c.verdict == "poisson" and c.ks_poisson < 0.03


def test_synthetic_wigner_classification():
    # inverse-CDF sampling of the surmise
    u = np.random.default_rng(12).uniform(size=10_000)
    s = np.sqrt(-4.0 * np.log1p(-u) / np.pi)
    c = st.classify_spacings(s)
    assert c.verdict == "wigner" and c.ks_wigner < 0.03


def test_constant_spacings_are_inconclusive():
    c = st.classify_spacings(st.unfold(np.arange(200.0)))
    assert c.verdict == "inconclusive"
    assert c.ks_poisson > 0 and c.ks_wigner > 0


def test_overpopulated_spacings_are_inconclusive():
    u = st.UnfoldedSpacings(np.r_[np.zeros(60), np.full(40, 2.5)], 3, degenerate_fraction=0.6)
    assert st.classify_spacings(u).verdict == "inconclusive"


def test_margin_controls_verdict():
    s = np.random.default_rng(13).exponential(size=2000)
    c = st.classify_spacings(s, margin=0.0)
    assert c.verdict == "poisson"
    assert st.classify_spacings(s, margin=10.0).verdict == "inconclusive"


def test_few_spacings_warn():
    with pytest.warns(UserWarning):
        st.classify_spacings(np.random.default_rng(0).exponential(size=20))


def test_delta_policy():
    assert st.resolve_delta("auto", 1255) == 35
    assert st.resolve_delta(7, 1255) == 7
    with pytest.raises(ValueError):
        st.resolve_delta(0, 10)
