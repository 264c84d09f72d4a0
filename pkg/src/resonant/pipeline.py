"""
End-to-end block runs and plot-ready artifacts.

Everything written here is a pure function of the inputs: floats are
serialized with ``repr`` (shortest round-trip form, at most 17 significant
digits), JSON keys keep insertion order, and nothing time-dependent goes
into data files.
"""

from __future__ import annotations

import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import statistics as st
from .couplings import CouplingProvider
from .errors import DegenerateSpectrumError, ResonantError
from .hamiltonian import DEFAULT_DIM_CAP, assemble_block
from .partitions import BlockLabel
from .spectra import (SpectrumRecord, degeneracy_summary, diagonalize,
                      integrality_deviation, max_eigenvalue)

__all__ = [
    "RunConfig",
    "BlockResult",
    "format_float",
    "write_column_csv",
    "read_column_csv",
    "write_matrix_csv",
    "write_histogram_csv",
    "write_json",
    "spectrum_metadata",
    "spectrum_statistics",
    "run_block",
    "run_pipeline",
    "FIGURES",
    "reproduce_figures",
]

log = logging.getLogger(__name__)


def format_float(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    return repr(x)


def _clean(obj):
    """Make an object JSON-safe: NaN becomes null, numpy scalars become Python."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return None if math.isnan(x) or math.isinf(x) else x
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def write_json(path, obj):
    Path(path).write_text(json.dumps(_clean(obj), indent=2) + "\n")


def write_column_csv(path, values):
    with open(path, "w") as fh:
        for v in values:
            fh.write(format_float(v) + "\n")


def read_column_csv(path) -> np.ndarray:
    values = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                values.append(float(line.split(",")[0]))
            except ValueError:
                continue  # header
    return np.array(values)


def write_matrix_csv(target, matrix):
    """Row-major CSV of ``matrix`` to a path or an open text stream."""
    H = np.asarray(matrix)
    lines = (",".join(format_float(v) for v in row) + "\n" for row in H)
    if hasattr(target, "write"):
        target.writelines(lines)
        return
    with open(target, "w") as fh:
        fh.writelines(lines)


def write_histogram_csv(path, hist: st.Histogram | None):
    with open(path, "w") as fh:
        fh.write("bin_left,bin_right,density\n")
        if hist is not None:
            for left, right, d in hist.rows():
                fh.write(f"{format_float(left)},{format_float(right)},{format_float(d)}\n")


def write_curves_csv(path, columns: dict):
    names = list(columns)
    rows = zip(*(columns[n] for n in names))
    with open(path, "w") as fh:
        fh.write(",".join(names) + "\n")
        for row in rows:
            fh.write(",".join(format_float(v) for v in row) + "\n")


def spectrum_metadata(spec: SpectrumRecord) -> dict:
    """Summary fields of the JSON sidecar written next to ``eigs.csv``."""
    summary = degeneracy_summary(spec)
    label = spec.label
    return {
        "label": {"N": label.n_particles, "M": label.m_level} if label is not None else None,
        "family": spec.family,
        "seed": spec.seed,
        "dim": spec.dim,
        "E_max": max_eigenvalue(spec) if spec.dim else None,
        "integrality_deviation": integrality_deviation(spec),
        "zero_multiplicity": summary.zero_multiplicity,
        "cluster_tolerance": summary.cluster_tolerance,
        "solver_tolerance": spec.solver_tolerance,
    }


def spectrum_statistics(spec: SpectrumRecord, delta="auto", margin=st.DEFAULT_MARGIN,
                        mode="equal-width"):
    """Spacing classification, Gumbel fit and histograms of one spectrum.

    Returns ``(stats_dict, eigenvalue_histogram, spacing_histogram)``;
    either histogram may be ``None`` when the spectrum does not support it.
    """
    E = spec.eigenvalues
    emax = float(E[-1]) if len(E) else math.nan
    out = {"dim": spec.dim, "delta": st.resolve_delta(delta, max(spec.dim, 1)),
           "histogram_mode": mode, "E_max": emax}
    cls, unfolded = st.spacing_statistics(spec, delta, margin)
    out.update({"degenerate_fraction": cls.degenerate_fraction, "ks_poisson": cls.ks_poisson,
                "ks_wigner": cls.ks_wigner, "margin": cls.margin, "verdict": cls.verdict,
                "note": cls.note})
    eig_hist = spacing_hist = None
    gumbel = None
    if emax > 0:
        eig_hist = st.normalized_eigenvalue_histogram(spec, delta, mode)
        try:
            g = st.fit_gumbel(E / emax)
            gumbel = {"mu": g.mu, "beta": g.beta}
        except (DegenerateSpectrumError, ValueError) as exc:
            log.info("no Gumbel fit: %s", exc)
    out["gumbel"] = gumbel
    if unfolded is not None:
        spacing_hist = st.spacing_histogram(unfolded, delta, mode)
    return out, eig_hist, spacing_hist


@dataclass
class RunConfig:
    """Inputs of one sweep of blocks."""

    family: str
    n_values: Sequence[int]
    m_values: Sequence[int]
    out_dir: Path
    seed: int = 0
    normalize_c0000: bool | None = None
    delta: object = "auto"
    margin: float = st.DEFAULT_MARGIN
    histogram_mode: str = "equal-width"
    threads: int = 1
    dim_cap: int = DEFAULT_DIM_CAP

    def __post_init__(self):
        self.out_dir = Path(self.out_dir)
        if not self.n_values or not self.m_values:
            raise ValueError("sweep ranges must be nonempty")

    @property
    def provider(self) -> CouplingProvider:
        return CouplingProvider(self.family, self.seed, self.normalize_c0000)

    def labels(self) -> list[BlockLabel]:
        return [BlockLabel.of(n, m) for n in self.n_values for m in self.m_values]


@dataclass
class BlockResult:
    label: BlockLabel
    directory: Path | None = None
    stats: dict = field(default_factory=dict)
    error: str | None = None


def block_dirname(provider: CouplingProvider, label) -> str:
    n, m = label
    tag = provider.family if provider.family != "random" else f"random_s{provider.seed}"
    return f"{tag}_N{n}_M{m}"


def run_block(label, provider, out_dir, *, delta="auto", margin=st.DEFAULT_MARGIN,
              mode="equal-width", threads=1, dim_cap=DEFAULT_DIM_CAP) -> BlockResult:
    """Assemble, diagonalize and analyse one block, writing its artifacts.

    Files written under ``out_dir/<family>_N<N>_M<M>/``: ``eigs.csv``,
    ``eigs.json`` (spectrum sidecar), ``hist.csv`` (normalized eigenvalues),
    ``spacing_hist.csv`` and ``stats.json``.
    """
    label = BlockLabel.of(*label)
    directory = Path(out_dir) / block_dirname(provider, label)
    directory.mkdir(parents=True, exist_ok=True)
    matrix = assemble_block(label, provider, threads=threads, dim_cap=dim_cap)
    spec = diagonalize(matrix)
    meta = spectrum_metadata(spec)
    meta["normalize_c0000"] = bool(provider.normalize_c0000)
    stats, eig_hist, spacing_hist = spectrum_statistics(spec, delta, margin, mode)
    stats = {"label": meta["label"], "family": provider.family,
             "seed": spec.seed, **stats,
             "integrality_deviation": meta["integrality_deviation"],
             "zero_multiplicity": meta["zero_multiplicity"]}
    write_column_csv(directory / "eigs.csv", spec.eigenvalues)
    write_json(directory / "eigs.json", meta)
    write_histogram_csv(directory / "hist.csv", eig_hist)
    write_histogram_csv(directory / "spacing_hist.csv", spacing_hist)
    write_json(directory / "stats.json", stats)
    return BlockResult(label, directory, stats)


def run_pipeline(config: RunConfig) -> tuple[int, list[BlockResult]]:
    """Run every block of a sweep; returns ``(exit_status, results)``.

    Blocks run concurrently on ``config.threads`` workers.  A failing block
    does not stop the sweep: its error lands in ``failures.json`` and the
    exit status becomes 1.
    """
    config.out_dir.mkdir(parents=True, exist_ok=True)
    if not os.access(config.out_dir, os.W_OK):
        raise PermissionError(f"output directory {config.out_dir} is not writable")
    provider = config.provider
    labels = config.labels()

    workers = max(1, int(config.threads))
    # a lone block gets the workers for its own assembly instead
    inner = workers if len(labels) == 1 else 1

    def one(label):
        try:
            return run_block(label, provider, config.out_dir, delta=config.delta,
                             margin=config.margin, mode=config.histogram_mode,
                             threads=inner, dim_cap=config.dim_cap)
        except ResonantError as exc:
            return BlockResult(label, error=f"{type(exc).__name__}: {exc} [block {label}]")

    if workers == 1 or len(labels) == 1:
        results = [one(label) for label in labels]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, labels))

    summary = {"provider": provider.describe(), "blocks": []}
    failures = []
    for r in results:
        entry = {"N": r.label.n_particles, "M": r.label.m_level}
        if r.error:
            entry["error"] = r.error
            failures.append(entry)
        else:
            entry.update({k: r.stats.get(k) for k in
                          ("dim", "E_max", "verdict", "ks_poisson", "ks_wigner",
                           "degenerate_fraction", "integrality_deviation")})
            entry["directory"] = r.directory.name
        summary["blocks"].append(entry)
    write_json(config.out_dir / "summary.json", summary)
    failure_path = config.out_dir / "failures.json"
    if failures:
        write_json(failure_path, failures)
    elif failure_path.exists():
        failure_path.unlink()
    return (1 if failures else 0), results


# Panels of the three figures: (panel, family, N = M sizes).
FIGURES = {
    1: [("a", "szego", (18, 23, 27))],
    2: [("a", "cf", (23,)), ("a", "mrs", (27,)), ("b", "lll", (20, 23))],
    3: [("a", "cf", (27,)), ("b", "lll", (27,)), ("c", "modcf", (27,)), ("d", "random", (27,))],
}


def _figure_blocks(figure, max_size):
    for panel, family, sizes in FIGURES[figure]:
        if max_size is not None:
            sizes = sorted({min(s, max_size) for s in sizes})
        for size in sizes:
            yield panel, family, size


def reproduce_figures(figure: int, out_dir, *, max_size: int | None = None, seed: int = 0,
                      delta="auto", margin=st.DEFAULT_MARGIN, threads: int = 1,
                      dim_cap: int = DEFAULT_DIM_CAP) -> dict:
    """Write the data behind one figure to ``out_dir``.

    Figures 1 and 2 get normalized-eigenvalue histograms (figure 1 also a
    Gumbel overlay); figure 3 gets unfolded spacing histograms with Poisson
    and Wigner curves.  ``max_size`` caps every block at ``N = M = max_size``.
    Panel (d) of figure 3 uses ``seed``; it reproduces the random system in
    distribution only.
    """
    if figure not in FIGURES:
        raise ValueError(f"unknown figure {figure}; expected one of {sorted(FIGURES)}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    blocks = list(_figure_blocks(figure, max_size))

    def one(item):
        panel, family, size = item
        provider = CouplingProvider(family, seed)
        matrix = assemble_block((size, size), provider, dim_cap=dim_cap)
        spec = diagonalize(matrix)
        return item, spec

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            spectra = list(pool.map(one, blocks))
    else:
        spectra = [one(b) for b in blocks]

    summary = {"figure": figure, "seed": seed, "panels": []}
    x_grid = np.linspace(0.0, 1.0, 201)
    s_grid = np.linspace(0.0, 4.0, 201)
    curves = {}
    for (panel, family, size), spec in spectra:
        stem = f"fig{figure}_{panel}_{family}_N{size}_M{size}"
        stats, eig_hist, spacing_hist = spectrum_statistics(spec, delta, margin)
        entry = {"panel": panel, "family": family, "N": size, "M": size, "dim": spec.dim}
        if figure in (1, 2):
            write_histogram_csv(out_dir / f"{stem}_hist.csv", eig_hist)
            entry["E_max"] = stats["E_max"]
            entry["gumbel"] = stats["gumbel"]
            if figure == 1 and stats["gumbel"]:
                g = st.GumbelParams(stats["gumbel"]["mu"], stats["gumbel"]["beta"])
                curves[f"gumbel_N{size}"] = st.gumbel_pdf(x_grid, g)
        else:
            write_histogram_csv(out_dir / f"{stem}_spacing_hist.csv", spacing_hist)
            entry.update({k: stats[k] for k in
                          ("delta", "ks_poisson", "ks_wigner", "verdict", "degenerate_fraction")})
        summary["panels"].append(entry)
    if figure == 1:
        write_curves_csv(out_dir / "fig1_curves.csv", {"x": x_grid, **curves})
    if figure == 3:
        write_curves_csv(out_dir / "fig3_curves.csv",
                         {"s": s_grid, "poisson": st.reference_density("poisson", s_grid),
                          "wigner": st.reference_density("wigner", s_grid)})
    write_json(out_dir / f"fig{figure}_summary.json", summary)
    return summary
