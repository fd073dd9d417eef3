"""End-to-end checks of the command-line front end: flag validation,
file formats, exit codes, and byte-level determinism."""

import json
import math
import subprocess

import numpy as np
import pytest

from cse_schemes.cli import (ConfigError, main, make_u0, parse_complex,
                             parse_range, parse_tau_list, resolve_grid)
from cse_schemes.grid import PeriodicGrid
from cse_schemes.stability import scan_qL


def read_csv(path):
    """Returns (metadata dict, column names, data rows as float lists)."""
    meta, cols, rows = {}, None, []
    for line in path.read_text().splitlines():
        if line.startswith("# columns: "):
            cols = line[len("# columns: "):].split(",")
        elif line.startswith("# "):
            key, _, value = line[2:].partition(": ")
            meta[key] = value
        else:
            rows.append([float(c) for c in line.split(",")])
    return meta, cols, rows


# ---------------------------------------------------------------------------
# parsers


def test_parse_range_linear_and_log():
    np.testing.assert_allclose(parse_range("0:1:5"), [0, 0.25, 0.5, 0.75, 1])
    np.testing.assert_allclose(parse_range("0.01:1:3log"), [0.01, 0.1, 1.0])
    np.testing.assert_allclose(parse_range("-1:1:3"), [-1, 0, 1])
    assert parse_range("2:2:1").tolist() == [2.0]


def test_parse_range_rejects_bad_specs():
    for bad in ("1:2", "1:2:0", "a:b:3", "-1:1:4log", "1:2:3:4"):
        with pytest.raises(ConfigError):
            parse_range(bad)


def test_parse_complex():
    assert parse_complex("1+0i") == 1 + 0j
    assert parse_complex("-0.5-0.3i") == -0.5 - 0.3j
    assert parse_complex("2") == 2 + 0j
    with pytest.raises(ConfigError):
        parse_complex("one")


def test_parse_tau_list():
    assert parse_tau_list("4e-3,2e-3,1e-3") == [4e-3, 2e-3, 1e-3]
    with pytest.raises(ConfigError):
        parse_tau_list("4e-3,2e-3")
    with pytest.raises(ConfigError):
        parse_tau_list("4e-3,2e-3,1.5e-3")
    with pytest.raises(ConfigError):
        parse_tau_list("4e-3,-2e-3,1e-3")


def test_resolve_grid():
    assert resolve_grid(64, None).num_points == 64
    g = resolve_grid(None, 2 * math.pi / 128)
    assert g.num_points == 128
    with pytest.raises(ConfigError):
        resolve_grid(64, 0.1)
    with pytest.raises(ConfigError):
        resolve_grid(None, None)
    with pytest.raises(ConfigError):
        resolve_grid(None, 1.0)       # 2*pi/1.0 is not an integer


def test_u0_presets(tmp_path):
    grid = PeriodicGrid(32)
    x = grid.points
    np.testing.assert_allclose(make_u0("exp-sin", grid).values, np.exp(np.sin(x)))
    pw = make_u0("plane-wave:0.5,2", grid).values
    np.testing.assert_allclose(pw, 0.5 * np.exp(2j * x))
    g = make_u0("gaussian:1,0.4", grid).values
    assert abs(g[0] - g[0].conjugate()) == 0          # real-valued
    assert g.real.argmax() == 16                       # centred mid-domain
    path = tmp_path / "u0.csv"
    np.savetxt(path, np.column_stack([pw.real, pw.imag]), delimiter=",")
    np.testing.assert_allclose(make_u0(f"file:{path}", grid).values, pw)
    for bad in ("exp-sin:1", "plane-wave:1", "gaussian:1,-1", "file:", "wavelet"):
        with pytest.raises(ConfigError):
            make_u0(bad, grid)
    with pytest.raises(ConfigError):
        make_u0(f"file:{path}", PeriodicGrid(64))      # length mismatch


# ---------------------------------------------------------------------------
# simulate


def test_simulate_outputs(tmp_path):
    code = main(["simulate", "--scheme", "fei", "--u0", "exp-sin",
                 "--lambda", "2", "--tau", "0.01", "--grid-points", "16",
                 "--t-end", "0.05", "--outdir", str(tmp_path)])
    assert code == 0
    meta, cols, rows = read_csv(tmp_path / "snapshots.csv")
    assert meta["tool"].startswith("cse-schemes ")
    assert meta["scheme"] == "fei"
    assert float(meta["max-rel-residual"]) < 1e-12
    assert cols == ["x", "Re U", "Im U", "|U|", "step", "t"]
    steps = sorted({int(r[4]) for r in rows})
    assert steps == [0, 1, 2, 3, 4, 5]
    assert sum(1 for r in rows if int(r[4]) == 0) == 16
    r0 = [r for r in rows if int(r[4]) == 0][0]
    assert r0[3] == pytest.approx(math.hypot(r0[1], r0[2]))

    meta_i, cols_i, rows_i = read_csv(tmp_path / "invariants.csv")
    assert cols_i == ["step", "t", "density", "energy"]
    assert len(rows_i) == 5
    dens = [r[2] for r in rows_i]
    ener = [r[3] for r in rows_i]
    assert max(dens) - min(dens) < 1e-10 * abs(dens[0])
    assert max(ener) - min(ener) < 1e-10 * abs(ener[0])


def test_simulate_final_two_steps_with_sparse_stride(tmp_path):
    main(["simulate", "--scheme", "besse", "--u0", "plane-wave:1,1",
          "--lambda", "-1", "--tau", "0.01", "--grid-points", "16",
          "--t-end", "0.05", "--record-stride", "100",
          "--outdir", str(tmp_path)])
    _, _, rows = read_csv(tmp_path / "snapshots.csv")
    steps = sorted({int(r[4]) for r in rows})
    assert steps == [0, 4, 5]


def test_simulate_t_end_zero(tmp_path):
    main(["simulate", "--scheme", "modified", "--theta", "0.5", "--gamma", "0.5",
          "--u0", "exp-sin", "--lambda", "1", "--tau", "0.01",
          "--grid-points", "16", "--t-end", "0", "--outdir", str(tmp_path)])
    _, _, rows = read_csv(tmp_path / "snapshots.csv")
    assert sorted({int(r[4]) for r in rows}) == [0]
    assert len(rows) == 16
    u0 = np.exp(np.sin(PeriodicGrid(16).points))
    np.testing.assert_allclose([r[1] for r in rows], u0, rtol=0, atol=0)
    _, _, inv_rows = read_csv(tmp_path / "invariants.csv")
    assert inv_rows == []


def test_simulate_byte_identical(tmp_path):
    argv = ["simulate", "--scheme", "besse", "--u0", "gaussian:1,0.5",
            "--lambda", "2", "--tau", "0.01", "--grid-points", "32",
            "--t-end", "0.1"]
    main(argv + ["--snapshots", str(tmp_path / "a.csv"),
                 "--invariants", str(tmp_path / "ai.csv")])
    main(argv + ["--snapshots", str(tmp_path / "b.csv"),
                 "--invariants", str(tmp_path / "bi.csv")])
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "ai.csv").read_bytes() == (tmp_path / "bi.csv").read_bytes()


def test_simulate_config_errors(tmp_path, capsys):
    base = ["simulate", "--u0", "exp-sin", "--lambda", "2", "--tau", "0.01",
            "--t-end", "0.05", "--outdir", str(tmp_path)]
    assert main(["simulate", "--scheme", "fei", "--theta", "0.5", "--u0",
                 "exp-sin", "--lambda", "2", "--tau", "0.01",
                 "--grid-points", "16", "--t-end", "0.05",
                 "--outdir", str(tmp_path)]) == 2
    assert "--theta" in capsys.readouterr().err
    assert main(base + ["--scheme", "fei", "--grid-points", "16",
                        "--h", "0.1"]) == 2
    assert main(base + ["--scheme", "fei"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(base + ["--scheme", "cranknicolson", "--grid-points", "16"])
    assert exc.value.code == 2


def test_env_var_default_outdir(tmp_path, monkeypatch):
    monkeypatch.setenv("CSE_SCHEMES_OUTDIR", str(tmp_path / "envout"))
    main(["stability", "boundary", "--f", "1+0i", "--theta-steps", "4"])
    assert (tmp_path / "envout" / "boundary.csv").exists()


# ---------------------------------------------------------------------------
# dispersion


def test_dispersion_table(tmp_path):
    out = tmp_path / "disp.csv"
    assert main(["dispersion", "--q", "0:4:5", "--out", str(out)]) == 0
    meta, cols, rows = read_csv(out)
    assert cols == ["s", "exact omega*tau", "fei omega*tau",
                    "besse omega*tau", "modified omega*tau"]
    for r in rows:
        s = r[0]
        assert r[1] == s
        assert r[2] == pytest.approx(math.atan(s), abs=1e-15)
        assert r[3] == pytest.approx(2 * math.atan(s / 2), abs=1e-15)
        assert r[4] == pytest.approx(math.atan(s), abs=1e-15)   # theta = 1


def test_dispersion_failure_rows_are_nan(tmp_path):
    out = tmp_path / "disp.csv"
    assert main(["dispersion", "--q=-1:1:3", "--K", "2.0", "--theta", "0.2",
                 "--out", str(out)]) == 0
    _, cols, rows = read_csv(out)
    mod = cols.index("modified omega*tau")
    assert all(math.isnan(r[mod]) for r in rows)
    assert all(not math.isnan(r[2]) for r in rows)


# ---------------------------------------------------------------------------
# stability subcommands


def test_roots_besse_linear_point(tmp_path):
    out = tmp_path / "roots.json"
    assert main(["stability", "roots", "--scheme", "besse", "--q", "0",
                 "--K", "0", "--L", "1", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["stable"] is True
    assert abs(doc["max_modulus"] - 1) <= 1e-9
    assert len(doc["roots"]) == 4 and len(doc["coefficients"]) == 5
    assert [-1.0, 0.0] in doc["roots"]
    f = complex(*doc["cubic_f"])
    assert abs(abs(f) - 1) < 1e-12

    main(["stability", "roots", "--scheme", "besse", "--q", "0",
          "--K", "0", "--L", "1", "--out", str(tmp_path / "roots2.json")])
    assert out.read_bytes() == (tmp_path / "roots2.json").read_bytes()


def test_roots_focusing_unstable(tmp_path):
    out = tmp_path / "roots.json"
    main(["stability", "roots", "--scheme", "besse", "--q=-1", "--K", "0",
          "--L", "1", "--out", str(out)])
    doc = json.loads(out.read_text())
    assert doc["stable"] is False and doc["max_modulus"] > 1 + 1e-6


def test_roots_dispersion_failure_exit(tmp_path, capsys):
    code = main(["stability", "roots", "--scheme", "modified", "--theta", "0",
                 "--gamma", "0.5", "--q", "0", "--K", "1.5", "--L", "0.5",
                 "--out", str(tmp_path / "r.json")])
    assert code == 4
    assert "dispersion failure" in capsys.readouterr().err


def test_scan2d_matches_library(tmp_path):
    out = tmp_path / "scan.csv"
    assert main(["stability", "scan2d", "--scheme", "fei", "--K", "0.5",
                 "--q=-0.5:0.5:4", "--L", "0.2:2:6", "--out", str(out)]) == 0
    meta, cols, rows = read_csv(out)
    assert meta["degenerate"] == "0"
    q = np.array([r[0] for r in rows])
    mat = np.array([r[1:] for r in rows])
    res = scan_qL("fei", 0.5, np.linspace(-0.5, 0.5, 4), np.linspace(0.2, 2, 6))
    np.testing.assert_allclose(q, res.q_grid, rtol=0, atol=0)
    np.testing.assert_allclose(mat, res.max_modulus, rtol=0, atol=0)


def test_region_fei_all_unstable(tmp_path):
    out = tmp_path / "region.csv"
    assert main(["stability", "region", "--scheme", "fei",
                 "--q", "0.01:1:3log", "--K", "0:1:2", "--out", str(out)]) == 0
    meta, cols, rows = read_csv(out)
    np.testing.assert_allclose([r[0] for r in rows], [0.01, 0.1, 1.0])
    assert all(r[1:] == [1.0, 1.0] for r in rows)
    assert "unstable" in meta["value"]


def test_region_rejects_log_L(tmp_path):
    assert main(["stability", "region", "--scheme", "besse", "--q", "0.1:1:2",
                 "--K", "0:1:2", "--L", "1:10:5log",
                 "--out", str(tmp_path / "r.csv")]) == 2


def test_boundary_curve(tmp_path):
    out = tmp_path / "boundary.csv"
    assert main(["stability", "boundary", "--f", "1+0i",
                 "--theta-steps", "360", "--out", str(out)]) == 0
    _, cols, rows = read_csv(out)
    assert cols == ["theta", "Re g", "Im g"]
    assert len(rows) == 360
    assert rows[0] == [0.0, -1.0, 0.0]
    # |g| stays within the necessary-condition bound of 3
    assert all(math.hypot(r[1], r[2]) <= 3 + 1e-12 for r in rows)


def test_boundary_rejects_non_unimodular_f(tmp_path):
    assert main(["stability", "boundary", "--f", "2+0i", "--theta-steps", "4",
                 "--out", str(tmp_path / "b.csv")]) == 2


def test_jobs_flag_accepted(tmp_path):
    assert main(["stability", "region", "--scheme", "besse", "--q=-1:-0.5:2",
                 "--K", "0:0:1", "--L=-3:3:61", "--jobs", "4",
                 "--out", str(tmp_path / "r.csv")]) == 0


# ---------------------------------------------------------------------------
# convergence


def test_convergence_table(tmp_path):
    out = tmp_path / "conv.csv"
    code = main(["convergence", "--scheme", "fei", "--u0", "exp-sin",
                 "--lambda", "2", "--t-end", "0.1", "--taus",
                 "4e-3,2e-3,1e-3", "--grid-points", "16",
                 "--accuracy", "1e-7", "--out", str(out)])
    assert code == 0
    meta, cols, rows = read_csv(out)
    assert cols == ["tau", "sup error", "observed order"]
    assert [r[0] for r in rows] == [4e-3, 2e-3, 1e-3]
    errs = [r[1] for r in rows]
    assert errs[0] > errs[1] > errs[2] > 0
    assert math.isnan(rows[0][2])
    for r in rows[1:]:
        assert r[2] == pytest.approx(2.0, abs=0.5)
    assert meta["reference-method"] == "besse"


def test_convergence_rejects_bad_taus(tmp_path):
    assert main(["convergence", "--scheme", "fei", "--u0", "exp-sin",
                 "--lambda", "2", "--t-end", "0.1", "--taus", "4e-3,2e-3",
                 "--grid-points", "16", "--out", str(tmp_path / "c.csv")]) == 2


# ---------------------------------------------------------------------------
# entry point


def test_console_script_version():
    proc = subprocess.run(["cse-schemes", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "cse-schemes 0.1.0"
