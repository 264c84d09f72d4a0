"""
Eigenvalue-distribution and level-spacing statistics.

Spacings are unfolded with a local window of ``delta`` levels on each side:

    s_raw[I] = (E[I+1] - E[I]) / (E[I+delta] - E[I-delta]),   I = delta+1 ... dim-delta

(1-based), then divided by their mean so the final sequence has mean 1.
The unfolded spacings are compared with the Poisson density ``exp(-s)`` and
the Wigner surmise ``(pi s / 2) exp(-pi s^2 / 4)`` through Kolmogorov-Smirnov
distances.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Literal, NamedTuple

import numpy as np

from .errors import DegenerateSpectrumError, UnfoldingWindowError
from .spectra import SpectrumRecord

__all__ = [
    "EULER_GAMMA",
    "DEFAULT_MARGIN",
    "Histogram",
    "UnfoldedSpacings",
    "GumbelParams",
    "SpacingClassification",
    "resolve_delta",
    "histogram",
    "normalized_eigenvalue_histogram",
    "spacing_histogram",
    "fit_gumbel",
    "gumbel_pdf",
    "fit_gaussian",
    "gaussian_pdf",
    "l2_distance",
    "degenerate_fraction",
    "unfold",
    "reference_density",
    "reference_cdf",
    "ks_statistic",
    "classify_spacings",
    "spacing_statistics",
]

EULER_GAMMA = 0.5772156649015329
DEFAULT_MARGIN = 0.02

# Gaps and windows narrower than this fraction of the spectral span count as
# exact degeneracies (numerical eigenvalues never tie exactly).
_ZERO_GAP_RTOL = 1e-10


@dataclass(frozen=True)
class Histogram:
    """Probability-normalized histogram: ``sum(densities * widths) == 1``."""

    bin_edges: np.ndarray
    densities: np.ndarray
    count: int
    mode: str = "equal-width"

    @property
    def widths(self):
        return np.diff(self.bin_edges)

    @property
    def centers(self):
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])

    @property
    def total_probability(self) -> float:
        return float(np.sum(self.densities * self.widths))

    def rows(self):
        """``(bin_left, bin_right, density)`` tuples."""
        e, d = self.bin_edges, self.densities
        return [(float(e[i]), float(e[i + 1]), float(d[i])) for i in range(len(d))]


@dataclass(frozen=True)
class UnfoldedSpacings:
    values: np.ndarray = field(repr=False)
    delta: int
    label: object = None
    degenerate_fraction: float = 0.0

    def __len__(self):
        return len(self.values)


class GumbelParams(NamedTuple):
    mu: float
    beta: float


class SpacingClassification(NamedTuple):
    ks_poisson: float
    ks_wigner: float
    verdict: Literal["poisson", "wigner", "inconclusive"]
    degenerate_fraction: float
    margin: float = DEFAULT_MARGIN
    note: str = ""


def resolve_delta(delta, n: int) -> int:
    """``round(sqrt(n))`` for ``"auto"``/``None``, else the given positive integer."""
    if delta is None or delta == "auto":
        return max(1, int(round(math.sqrt(n))))
    delta = int(delta)
    if delta < 1:
        raise ValueError("delta must be a positive integer")
    return delta


def histogram(samples, lo: float, hi: float, delta="auto",
              mode: str = "equal-width") -> Histogram:
    """Probability-normalized histogram of ``samples`` on ``[lo, hi]``.

    ``equal-width`` uses ``ceil(n / delta)`` bins of equal width;
    ``equal-count`` puts ``delta`` samples in each bin (edges at sample
    quantiles, merged where ties make them coincide).
    """
    x = np.asarray(samples, dtype=float)
    n = len(x)
    if n == 0:
        raise ValueError("cannot histogram an empty sample")
    delta = resolve_delta(delta, n)
    if hi <= lo:
        hi = lo + 1.0
    if mode == "equal-width":
        edges = np.linspace(lo, hi, math.ceil(n / delta) + 1)
    elif mode == "equal-count":
        xs = np.sort(x)
        cuts = [0.5 * (xs[i - 1] + xs[i]) for i in range(delta, n, delta)]
        edges = np.unique(np.concatenate([[lo], cuts, [hi]]))
        if len(edges) < 2:
            edges = np.array([lo, hi])
    else:
        raise ValueError(f"unknown histogram mode {mode!r}")
    counts, edges = np.histogram(x, bins=edges)
    densities = counts / (n * np.diff(edges))
    return Histogram(edges, densities, n, mode)


def normalized_eigenvalue_histogram(spec: SpectrumRecord, delta="auto",
                                    mode: str = "equal-width") -> Histogram:
    """Histogram of ``E / E_max`` over ``[min(0, E_min / E_max), 1]``."""
    E = spec.eigenvalues
    emax = E[-1] if len(E) else 0.0
    if emax <= 0:
        raise DegenerateSpectrumError(f"E_max = {emax} <= 0; cannot normalize spectrum")
    x = E / emax
    return histogram(x, min(0.0, float(x[0])), 1.0, delta, mode)


def spacing_histogram(spacings, delta="auto", mode: str = "equal-width") -> Histogram:
    """Histogram of unfolded spacings over ``[0, max(4, s_max)]``."""
    s = np.asarray(getattr(spacings, "values", spacings), dtype=float)
    if len(s) == 0:
        raise ValueError("no spacings to histogram")
    return histogram(s, 0.0, max(4.0, float(s.max())), delta, mode)


def _weighted_samples(data):
    if isinstance(data, Histogram):
        return data.centers, data.densities * data.widths, data.count
    x = np.asarray(getattr(data, "values", data), dtype=float)
    return x, np.full(len(x), 1.0 / max(len(x), 1)), len(x)


def _moments(data):
    x, w, n = _weighted_samples(data)
    if n < 10:
        raise ValueError(f"need at least 10 samples for a fit, got {n}")
    w = w / w.sum()
    mean = float(np.sum(w * x))
    var = float(np.sum(w * (x - mean) ** 2))
    if not var > 0:
        raise DegenerateSpectrumError("zero-variance data; nothing to fit")
    return mean, var


def fit_gumbel(data) -> GumbelParams:
    """Moment-matched Gumbel parameters for samples or a :class:`Histogram`.

    ``beta = sqrt(6 var) / pi`` and ``mu = mean - gamma * beta``.
    """
    mean, var = _moments(data)
    beta = math.sqrt(6.0 * var) / math.pi
    return GumbelParams(mean - EULER_GAMMA * beta, beta)


def gumbel_pdf(x, params: GumbelParams):
    """``d/dx exp(-exp(-(x - mu) / beta))``."""
    z = (np.asarray(x, dtype=float) - params.mu) / params.beta
    return np.exp(-z - np.exp(-z)) / params.beta


def fit_gaussian(data) -> tuple[float, float]:
    """``(mean, std)`` by moment matching."""
    mean, var = _moments(data)
    return mean, math.sqrt(var)


def gaussian_pdf(x, mean: float, std: float):
    z = (np.asarray(x, dtype=float) - mean) / std
    return np.exp(-0.5 * z * z) / (std * math.sqrt(2.0 * math.pi))


def l2_distance(hist: Histogram, pdf: Callable) -> float:
    """``sqrt(sum((density - pdf(center))^2 * width))`` over the bins."""
    diff = hist.densities - pdf(hist.centers)
    return float(np.sqrt(np.sum(diff * diff * hist.widths)))


def _zero_gap_tol(E) -> float:
    span = float(E[-1] - E[0]) if len(E) else 0.0
    return _ZERO_GAP_RTOL * span


def degenerate_fraction(spec) -> float:
    """Share of nearest-neighbour gaps that vanish (up to rounding)."""
    E = np.sort(np.asarray(getattr(spec, "eigenvalues", spec), dtype=float))
    if len(E) < 2:
        return 0.0
    gaps = np.diff(E)
    return float(np.mean(gaps <= _zero_gap_tol(E)))


def unfold(spec, delta="auto") -> UnfoldedSpacings:
    """Locally unfolded nearest-neighbour spacings with unit mean.

    Parameters
    ----------
    spec : SpectrumRecord or array_like
        Eigenvalues; sorted ascending here.
    delta : "auto" or int
        Half-width of the smoothing window in levels; ``round(sqrt(dim))``
        by default.

    Raises
    ------
    UnfoldingWindowError
        If some window ``E[I+delta] - E[I-delta]`` has zero width.
    DegenerateSpectrumError
        If all spacings in the unfolding range vanish.
    """
    E = np.sort(np.asarray(getattr(spec, "eigenvalues", spec), dtype=float))
    dim = len(E)
    delta = resolve_delta(delta, dim)
    if dim < 2 * delta + 2:
        raise ValueError(f"spectrum of {dim} levels is too short for delta={delta}")
    i = np.arange(delta, dim - delta)  # 0-based I - 1
    window = E[i + delta] - E[i - delta]
    bad = np.flatnonzero(window <= _zero_gap_tol(E))
    if len(bad):
        raise UnfoldingWindowError(int(i[bad[0]]) + 1)
    raw = (E[i + 1] - E[i]) / window
    if not raw.mean() > 0:
        raise DegenerateSpectrumError("every spacing in the unfolding range is zero")
    values = raw / raw.mean()
    return UnfoldedSpacings(values, delta, getattr(spec, "label", None), degenerate_fraction(E))


def reference_density(kind: str, s):
    """Poisson ``exp(-s)`` or Wigner surmise ``(pi s / 2) exp(-pi s^2 / 4)``."""
    s = np.asarray(s, dtype=float)
    if kind == "poisson":
        return np.exp(-s)
    if kind == "wigner":
        return 0.5 * np.pi * s * np.exp(-0.25 * np.pi * s * s)
    raise ValueError(f"unknown reference distribution {kind!r}")


def reference_cdf(kind: str, s):
    s = np.asarray(s, dtype=float)
    if kind == "poisson":
        return -np.expm1(-s)
    if kind == "wigner":
        return -np.expm1(-0.25 * np.pi * s * s)
    raise ValueError(f"unknown reference distribution {kind!r}")


def ks_statistic(samples, cdf: Callable) -> float:
    """Kolmogorov-Smirnov distance ``sup |F_n - F|`` to a continuous CDF."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = len(x)
    if n == 0:
        raise ValueError("empty sample")
    F = cdf(x)
    k = np.arange(1, n + 1)
    return float(max(np.max(k / n - F), np.max(F - (k - 1) / n)))


def classify_spacings(spacings, margin: float = DEFAULT_MARGIN) -> SpacingClassification:
    """Poisson-vs-Wigner verdict from KS distances.

    The verdict is ``poisson`` when ``ks_poisson < ks_wigner - margin``,
    ``wigner`` in the mirrored case and ``inconclusive`` otherwise.  It is
    also ``inconclusive`` when more than half of the spacings vanish or
    when all spacings are equal.
    """
    s = np.asarray(getattr(spacings, "values", spacings), dtype=float)
    if len(s) < 100:
        warnings.warn(f"only {len(s)} spacings; classification is unreliable", stacklevel=2)
    ks_p = ks_statistic(s, lambda x: reference_cdf("poisson", x))
    ks_w = ks_statistic(s, lambda x: reference_cdf("wigner", x))
    frac = getattr(spacings, "degenerate_fraction", None)
    if frac is None:
        frac = float(np.mean(s <= 0.0)) if len(s) else 0.0
    note = ""
    if frac > 0.5:
        verdict, note = "inconclusive", "overpopulated spectrum: most level gaps vanish"
    elif np.ptp(s) <= 1e-12 * max(1.0, float(np.abs(s).max())):
        verdict, note = "inconclusive", "zero-variance spacings"
    elif ks_p < ks_w - margin:
        verdict = "poisson"
    elif ks_w < ks_p - margin:
        verdict = "wigner"
    else:
        verdict = "inconclusive"
    return SpacingClassification(ks_p, ks_w, verdict, float(frac), margin, note)


def spacing_statistics(spec, delta="auto", margin: float = DEFAULT_MARGIN):
    """Unfold and classify, tolerating overpopulated spectra.

    Returns ``(classification, unfolded)``.  When more than half of the
    level gaps vanish, or an unfolding window collapses, ``unfolded`` is
    ``None`` and the verdict is ``inconclusive`` with NaN KS distances; the
    same happens for spectra too short for the unfolding window.
    """
    frac = degenerate_fraction(spec)
    dim = len(getattr(spec, "eigenvalues", spec))
    if dim < 2 * resolve_delta(delta, max(dim, 1)) + 2:
        return SpacingClassification(math.nan, math.nan, "inconclusive", frac, margin,
                                     f"too few levels ({dim}) to unfold"), None
    if frac > 0.5:
        return SpacingClassification(math.nan, math.nan, "inconclusive", frac, margin,
                                     "overpopulated spectrum: most level gaps vanish"), None
    try:
        unfolded = unfold(spec, delta)
    except UnfoldingWindowError as exc:
        return SpacingClassification(math.nan, math.nan, "inconclusive", frac, margin,
                                     f"degenerate unfolding window at level {exc.index}"), None
    except DegenerateSpectrumError as exc:
        return SpacingClassification(math.nan, math.nan, "inconclusive", frac, margin,
                                     str(exc)), None
    return classify_spacings(unfolded, margin), unfolded
