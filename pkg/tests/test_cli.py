import json
import subprocess
import sys

import numpy as np
import pytest

from resonant.cli import main
from resonant.pipeline import read_column_csv

# tiny sweep blocks legitimately have too few spacings to classify
pytestmark = pytest.mark.filterwarnings("ignore:only .* spacings:UserWarning")


def test_basis_list(capsys):
    assert main(["basis", "--n", "2", "--m", "3", "--list"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "2"
    assert lines[1:] == ["1,0,0,1", "0,1,1,0"]


def test_basis_count_only(capsys):
    main(["basis", "--n", "27", "--m", "27"])
    assert capsys.readouterr().out.strip() == "3010"


def test_spectrum_szego(tmp_path):
    out = tmp_path / "eigs.csv"
    assert main(["spectrum", "--system", "szego", "--n", "4", "--m", "6", "--out", str(out)]) == 0
    E = read_column_csv(out)
    assert len(E) == 9
    assert np.all(np.diff(E) >= 0)
    assert abs(E.max() - 24) <= 1e-8
    meta = json.loads(out.with_suffix(".json").read_text())
    assert meta["dim"] == 9 and meta["seed"] is None
    for key in ("label", "family", "E_max", "integrality_deviation",
                "zero_multiplicity", "solver_tolerance"):
        assert key in meta


def test_spectrum_validate_random(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["spectrum", "--system", "random", "--seed", "9", "--n", "5", "--m", "7",
                 "--validate", "--out", str(out)]) == 0
    meta = json.loads(out.with_suffix(".json").read_text())
    assert meta["seed"] == 9 and meta["normalize_c0000"] is True


def test_matrix_csv(tmp_path, capsys):
    out = tmp_path / "m.csv"
    assert main(["matrix", "--system", "cf", "--n", "3", "--m", "4", "--out", str(out)]) == 0
    H = np.loadtxt(out, delimiter=",")
    assert H.shape == (4, 4)
    np.testing.assert_array_equal(H, H.T)
    main(["matrix", "--system", "cf", "--n", "3", "--m", "4"])
    assert capsys.readouterr().out == out.read_text()


def test_stats_equally_spaced(tmp_path):
    eigs = tmp_path / "eigs.csv"
    eigs.write_text("".join(f"{i}.0\n" for i in range(200)))
    hist = tmp_path / "hist.csv"
    out = tmp_path / "stats.json"
    assert main(["stats", "--in", str(eigs), "--out", str(out), "--histogram", str(hist)]) == 0
    stats = json.loads(out.read_text())
    assert stats["verdict"] == "inconclusive"
    assert stats["ks_poisson"] > 0 and stats["ks_wigner"] > 0
    for key in ("delta", "degenerate_fraction", "gumbel", "E_max"):
        assert key in stats
    rows = hist.read_text().splitlines()
    assert rows[0] == "bin_left,bin_right,density"
    densities = [float(r.split(",")[2]) for r in rows[1:]]
    assert sum(d > 0 for d in densities) == 1


def test_stats_default_output(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "e.csv").write_text("\n".join(repr(x) for x in
                                              np.cumsum(np.random.default_rng(0).exponential(size=300))))
    assert main(["stats", "--in", "e.csv", "--delta", "5"]) == 0
    stats = json.loads((tmp_path / "stats.json").read_text())
    assert stats["delta"] == 5


def test_verify_exit_codes(capsys):
    assert main(["verify", "--suite", "two-particle", "--max-m", "7"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.strip().endswith("16/16 cases passed")
    assert main(["verify", "--suite", "emax", "--n", "4", "--max-m", "4"]) == 0
    assert main(["verify", "--suite", "integer", "--n", "4", "--max-m", "4"]) == 0
    assert main(["verify", "--suite", "inheritance"]) == 0
    capsys.readouterr()


def test_verify_failure_exits_nonzero(monkeypatch, capsys):
    from resonant import oracles
    monkeypatch.setattr(oracles, "verify_two_particle",
                        lambda max_m: [oracles.VerificationCase("x", False, "forced")])
    assert main(["verify", "--suite", "two-particle"]) == 1
    assert "FAIL  x: forced" in capsys.readouterr().out


def test_run_sweep_with_failures(tmp_path, capsys):
    out = tmp_path / "sweep"
    status = main(["run", "--system", "cf", "--n", "3,4", "--m", "2:6",
                   "--dim-cap", "6", "--threads", "2", "--out-dir", str(out)])
    assert status == 1
    summary = json.loads((out / "summary.json").read_text())
    assert len(summary["blocks"]) == 10
    failures = json.loads((out / "failures.json").read_text())
    assert failures and all("error" in f for f in failures)
    assert all(f["N"] == 4 or f["M"] >= 6 for f in failures)
    done = out / "cf_N3_M4"
    for name in ("eigs.csv", "eigs.json", "hist.csv", "spacing_hist.csv", "stats.json"):
        assert (done / name).is_file()
    assert "FAIL" in capsys.readouterr().out


def test_run_success(tmp_path):
    out = tmp_path / "ok"
    assert main(["run", "--system", "random", "--seed", "3", "--n", "5", "--m", "5:6",
                 "--out-dir", str(out)]) == 0
    assert not (out / "failures.json").exists()
    assert (out / "random_s3_N5_M6" / "stats.json").is_file()


def test_figures_downscaled(tmp_path, capsys):
    assert main(["figures", "--figure", "1", "--max-size", "18", "--out-dir", str(tmp_path)]) == 0
    summary = json.loads((tmp_path / "fig1_summary.json").read_text())
    # all three panels collapse onto the one capped block
    assert [p["dim"] for p in summary["panels"]] == [385]
    hist = tmp_path / "fig1_a_szego_N18_M18_hist.csv"
    assert hist.is_file()
    curves = (tmp_path / "fig1_curves.csv").read_text().splitlines()
    assert curves[0].startswith("x,gumbel_N18")
    assert len(curves) == 202
    rows = hist.read_text().splitlines()
    assert len(rows) - 1 == -(-385 // 20)


def test_figure3_small(tmp_path):
    assert main(["figures", "--figure", "3", "--max-size", "12", "--out-dir", str(tmp_path)]) == 0
    summary = json.loads((tmp_path / "fig3_summary.json").read_text())
    assert [p["family"] for p in summary["panels"]] == ["cf", "lll", "modcf", "random"]
    header = (tmp_path / "fig3_curves.csv").read_text().splitlines()[0]
    assert header == "s,poisson,wigner"


def test_thread_env_is_honoured(tmp_path, monkeypatch):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["matrix", "--system", "random", "--seed", "1", "--n", "6", "--m", "8", "--out", str(a)])
    monkeypatch.setenv("RESONANT_THREADS", "4")
    main(["matrix", "--system", "random", "--seed", "1", "--n", "6", "--m", "8", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_library_errors_become_exit_status(capsys):
    assert main(["matrix", "--system", "cf", "--n", "10", "--m", "10", "--dim-cap", "5"]) == 1
    assert "error:" in capsys.readouterr().err


def test_bad_arguments():
    with pytest.raises(SystemExit):
        main(["spectrum", "--system", "nope", "--n", "1", "--m", "1"])
    with pytest.raises(SystemExit):
        main([])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "resonant.cli", "basis", "--n", "3", "--m", "5"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.strip() == "5"
