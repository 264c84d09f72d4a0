"""Command-line front end: ``resonant <command> ...``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import oracles
from . import statistics as st
from .couplings import FAMILIES, CouplingProvider
from .errors import ResonantError
from .hamiltonian import DEFAULT_DIM_CAP, assemble_block, nonzero_fraction
from .partitions import count_partitions, iter_fock_states
from .pipeline import (RunConfig, read_column_csv, reproduce_figures, run_pipeline,
                       spectrum_metadata, spectrum_statistics, write_column_csv,
                       write_histogram_csv, write_json, write_matrix_csv)
from .spectra import diagonalize, spectrum_from_values

log = logging.getLogger("resonant")


def _bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def _delta(text: str):
    return "auto" if text == "auto" else int(text)


def _int_range(text: str) -> list[int]:
    """``"5"``, ``"2:6"`` (inclusive) or ``"2,4,8"``."""
    values = []
    for part in text.split(","):
        if ":" in part:
            lo, hi = part.split(":")
            values.extend(range(int(lo), int(hi) + 1))
        else:
            values.append(int(part))
    if not values:
        raise argparse.ArgumentTypeError("empty range")
    return values


def _default_threads() -> int:
    return int(os.environ.get("RESONANT_THREADS", "1") or 1)


def _add_system(p):
    p.add_argument("--system", choices=FAMILIES, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--normalize-c0000", type=_bool, default=None, metavar="BOOL")


def _add_block(p):
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)


def _add_compute(p):
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default $RESONANT_THREADS or 1)")
    p.add_argument("--dim-cap", type=int, default=DEFAULT_DIM_CAP)


def _provider(args):
    return CouplingProvider(args.system, args.seed, args.normalize_c0000)


def _threads(args):
    return args.threads if args.threads is not None else _default_threads()


def cmd_basis(args):
    label = (args.n, args.m)
    print(count_partitions(label))
    if args.list:
        for state in iter_fock_states(label):
            print(",".join(map(str, state)))
    return 0


def cmd_matrix(args):
    matrix = assemble_block((args.n, args.m), _provider(args), threads=_threads(args),
                            dim_cap=args.dim_cap)
    write_matrix_csv(args.out or sys.stdout, matrix.entries)
    log.info("dim %d, nonzero fraction %.4f", matrix.dim, nonzero_fraction(matrix))
    return 0


def cmd_spectrum(args):
    provider = _provider(args)
    matrix = assemble_block((args.n, args.m), provider, threads=_threads(args),
                            dim_cap=args.dim_cap)
    spec = diagonalize(matrix, validate=args.validate)
    out = Path(args.out)
    write_column_csv(out, spec.eigenvalues)
    meta = spectrum_metadata(spec)
    meta["seed"] = provider.seed if provider.family == "random" else None
    meta["normalize_c0000"] = bool(provider.normalize_c0000)
    write_json(out.with_suffix(".json"), meta)
    print(f"dim={spec.dim} E_max={meta['E_max']!r} -> {out}")
    return 0


def cmd_stats(args):
    values = read_column_csv(args.input)
    spec = spectrum_from_values(values)
    stats, eig_hist, spacing_hist = spectrum_statistics(spec, args.delta, args.margin, args.mode)
    write_json(args.out, stats)
    if args.histogram:
        write_histogram_csv(args.histogram, spacing_hist)
    if args.eig_histogram:
        write_histogram_csv(args.eig_histogram, eig_hist)
    print(f"verdict={stats['verdict']} ks_poisson={stats['ks_poisson']} "
          f"ks_wigner={stats['ks_wigner']}")
    return 0


def cmd_verify(args):
    if args.suite == "two-particle":
        cases = oracles.verify_two_particle(args.max_m if args.max_m is not None else 25)
    elif args.suite == "emax":
        cases = oracles.verify_emax(args.n or 12, args.max_m if args.max_m is not None else 12)
    elif args.suite == "integer":
        cases = oracles.verify_integer(args.n or 12, args.max_m if args.max_m is not None else 12)
    else:
        lo = args.m if args.m is not None else 4
        hi = args.max_m if args.max_m is not None else 10
        cases = oracles.verify_inheritance(args.n or 4, tuple(range(lo, hi + 1, 2)))
    failed = 0
    for case in cases:
        failed += not case.passed
        print(f"{'PASS' if case.passed else 'FAIL'}  {case.name}: {case.detail}")
    print(f"{len(cases) - failed}/{len(cases)} cases passed")
    return 1 if failed else 0


def cmd_run(args):
    config = RunConfig(args.system, args.n, args.m, args.out_dir, seed=args.seed,
                       normalize_c0000=args.normalize_c0000, delta=args.delta,
                       margin=args.margin, histogram_mode=args.mode,
                       threads=_threads(args), dim_cap=args.dim_cap)
    status, results = run_pipeline(config)
    for r in results:
        if r.error:
            print(f"FAIL {r.label}: {r.error}")
        else:
            print(f"{r.label}: dim={r.stats['dim']} verdict={r.stats['verdict']}")
    return status


def cmd_figures(args):
    summary = reproduce_figures(args.figure, args.out_dir, max_size=args.max_size,
                                seed=args.seed, delta=args.delta, margin=args.margin,
                                threads=_threads(args), dim_cap=args.dim_cap)
    for panel in summary["panels"]:
        extra = f" verdict={panel['verdict']}" if "verdict" in panel else ""
        print(f"fig{args.figure}({panel['panel']}) {panel['family']} "
              f"N=M={panel['N']} dim={panel['dim']}{extra}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="resonant",
        description="Block spectra and level statistics of quantum resonant Hamiltonians.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basis", help="count (and list) the Fock basis of a block")
    _add_block(p)
    p.add_argument("--list", action="store_true", help="print one occupation vector per line")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("matrix", help="assemble a Hamiltonian block as CSV")
    _add_system(p)
    _add_block(p)
    _add_compute(p)
    p.add_argument("--out", help="output CSV (default stdout)")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("spectrum", help="diagonalize a block")
    _add_system(p)
    _add_block(p)
    _add_compute(p)
    p.add_argument("--out", default="eigs.csv")
    p.add_argument("--validate", action="store_true", help="check eigenpair residuals")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("stats", help="spacing statistics of an eigenvalue file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--delta", type=_delta, default="auto")
    p.add_argument("--margin", type=float, default=st.DEFAULT_MARGIN)
    p.add_argument("--mode", choices=("equal-width", "equal-count"), default="equal-width")
    p.add_argument("--out", default="stats.json")
    p.add_argument("--histogram", help="spacing histogram CSV")
    p.add_argument("--eig-histogram", help="normalized eigenvalue histogram CSV")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("verify", help="check closed-form results")
    p.add_argument("--suite", choices=oracles.SUITES, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--max-m", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("run", help="full pipeline over a sweep of blocks")
    _add_system(p)
    p.add_argument("--n", type=_int_range, required=True, help="N, N1:N2 or N1,N2,...")
    p.add_argument("--m", type=_int_range, required=True, help="M, M1:M2 or M1,M2,...")
    _add_compute(p)
    p.add_argument("--delta", type=_delta, default="auto")
    p.add_argument("--margin", type=float, default=st.DEFAULT_MARGIN)
    p.add_argument("--mode", choices=("equal-width", "equal-count"), default="equal-width")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("figures", help="data behind figures 1-3")
    p.add_argument("--figure", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--max-size", type=int, help="cap every block at N = M = this")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta", type=_delta, default="auto")
    p.add_argument("--margin", type=float, default=st.DEFAULT_MARGIN)
    _add_compute(p)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_figures)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ResonantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
