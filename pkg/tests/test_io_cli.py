import json
import math
import subprocess
import sys

import numpy as np
import pytest

from carleson_primes import io as fio
from carleson_primes import cli
from carleson_primes.config import ConfigError, RunConfig, load_config, parse_config_text
from carleson_primes.experiments import run_experiment, rerun_manifest
from carleson_primes.lambdaset import LambdaSet, lacunary
from carleson_primes.maximal import SignalZ
from carleson_primes.multiplier import FreqGrid, SampledMultiplier
from carleson_primes.variation import VectorPath

SMALL = {
    "error_decay": "j_min = 6\nj_max = 9\nlambda_points = 8\n",
    "norm_growth": "k_list = 2, 4\ngrid_size = 4096\ntrials = 3\nlambda_grid = 5\n",
    "s_decay": "N = 2\nc = 1/128\ns_list = 0, 1\np_list = 2\ntrials = 3\ngrid_size = 1024\n",
    "covering": "k_max = 12\nfit_k_max = 40\nfit_j_max = 8\n",
}


# --- config -------------------------------------------------------------------


def test_config_defaults_and_parsing():
    cfg = parse_config_text("c = 1/32  # comment\nN = 8\np_list = 2, 5/3\nstrict = false\nalpha = 3\n")
    assert cfg.c == 1 / 32 and cfg.N == 8 and cfg.p_list == [2.0, 5 / 3]
    assert cfg.constants().alpha == 3
    assert RunConfig().constants().N == 16
    assert RunConfig.from_dict(RunConfig().as_dict()) == RunConfig()


@pytest.mark.parametrize(
    "text, where, field",
    [
        ("c = 1/64\nN = 12\n", ":2:", "'N'"),
        ("c = abc\n", ":1:", "'c'"),
        ("\n\nbogus = 3\n", ":3:", "'bogus'"),
        ("trials = 2.5\n", ":1:", "'trials'"),
        ("c = 1/64\n c 0.1\n", ":2:", "expected"),
        ("j_min = 10\nj_max = 5\n", ":2:", "'j_max'"),
        ("alpha = 4\n", ":1:", "alpha"),
        ("k_list = 2, x\n", ":1:", "'k_list'"),
    ],
)
def test_config_errors_name_file_line_field(tmp_path, text, where, field):
    p = tmp_path / "bad.cfg"
    p.write_text(text)
    with pytest.raises(ConfigError) as exc:
        load_config(p)
    msg = str(exc.value)
    assert str(p) in msg and where in msg and field in msg


# --- file formats ---------------------------------------------------------------


def test_csv_header_and_round_trip(tmp_path):
    p = fio.write_csv(tmp_path / "t.csv", "demo", ["a", "b"], [[1, 0.1], [2, 1 / 3]])
    assert p.read_text().splitlines()[0] == f"# schema: demo v{fio.SCHEMA_VERSION}"
    header, rows = fio.read_csv(p)
    assert header == ["a", "b"] and float(rows[1][1][1]) == 1 / 3


def test_lambda_file_round_trip_and_errors(tmp_path):
    lam = lacunary(2, 10)
    p = fio.write_lambda_file(tmp_path / "lam.txt", lam)
    assert np.array_equal(fio.read_lambda_file(p).points, lam.points)
    bad = tmp_path / "bad.txt"
    bad.write_text("0.1\n# note\n\n1.5\n")
    with pytest.raises(fio.FormatError, match=r"bad.txt:4: field 'lambda'"):
        fio.read_lambda_file(bad)
    bad.write_text("0.1\nnope\n")
    with pytest.raises(fio.FormatError, match=r":2: field 'lambda'"):
        fio.read_lambda_file(bad)


def test_path_file_round_trip_and_errors(tmp_path):
    rng = np.random.default_rng(0)
    vp = VectorPath(np.linspace(0, 1, 7), rng.normal(size=(7, 3)) + 1j * rng.normal(size=(7, 3)))
    p = fio.write_path_csv(tmp_path / "path.csv", vp)
    back = fio.read_path_csv(p)
    assert np.array_equal(back.points, vp.points) and np.array_equal(back.lambdas, vp.lambdas)
    real = VectorPath(np.arange(3.0), np.array([1.0, 2.0, 4.0]))
    assert fio.read_path_csv(fio.write_path_csv(tmp_path / "r.csv", real)).points.dtype == float
    bad = tmp_path / "bad.csv"
    bad.write_text("lambda,component_1\n0,1\n1,oops\n")
    with pytest.raises(fio.FormatError, match=r":3: field 'component_1'"):
        fio.read_path_csv(bad)
    bad.write_text("lambda,component_1\n0,1\n0,2\n")
    with pytest.raises(fio.FormatError):
        fio.read_path_csv(bad)


def test_signal_round_trip_and_errors(tmp_path):
    f = SignalZ(-3, np.array([1.0, 0.5 - 2j, 0.0, 3.0]))
    back = fio.read_signal_csv(fio.write_signal_csv(tmp_path / "f.csv", f))
    assert back.support_offset == -3 and np.array_equal(back.samples, f.samples)
    bad = tmp_path / "bad.csv"
    bad.write_text("n,re,im\n0,1,0\n1.5,1,0\n")
    with pytest.raises(fio.FormatError, match=r":3: field 'n'"):
        fio.read_signal_csv(bad)


def test_multiplier_round_trip(tmp_path):
    g = FreqGrid.torus(64)
    m = SampledMultiplier(g, np.exp(2j * np.pi * g.points) * np.arange(64))
    fio.write_multiplier(tmp_path / "m", m)
    back = fio.read_multiplier(tmp_path / "m")
    assert back.grid == g and np.array_equal(back.values, m.values)
    (tmp_path / "m.bin").write_bytes(b"\0" * 16)
    with pytest.raises(fio.FormatError):
        fio.read_multiplier(tmp_path / "m")


# --- experiments and CLI ---------------------------------------------------------


def _cfg(tmp_path, name):
    p = tmp_path / f"{name}.cfg"
    p.write_text(SMALL[name])
    return p


def _rows(path):
    header, rows = fio.read_csv(path)
    return [dict(zip(header, r)) for _, r in rows]


def test_error_decay_column_equals_sup_m(tmp_path):
    run_experiment("error_decay", load_config(_cfg(tmp_path, "error_decay")), 0, tmp_path / "out")
    rows = _rows(tmp_path / "out" / "error_decay.csv")
    assert len(rows) == 4
    for r in rows:
        assert r["sup_E_j"] == r["sup_m_j"] and r["num_shells"] == "0"
        assert math.isfinite(float(r["fitted_slope"]))


def test_covering_reproduces_k_plus_2(tmp_path):
    cfg = load_config(_cfg(tmp_path, "covering"))
    cfg.k_max = 30
    run_experiment("covering", cfg, 0, tmp_path / "out")
    rows = _rows(tmp_path / "out" / "covering_brackets.csv")
    assert len(rows) == 29
    assert all(r["N_at_lo"] == r["N_below_hi"] == r["k_plus_2"] for r in rows)


def test_variation_constant_path(tmp_path):
    p = fio.write_path_csv(tmp_path / "c.csv", VectorPath(np.arange(5.0), np.full((5, 2), 1.5)))
    out = tmp_path / "out"
    assert cli.main(["--experiment", "variation", "--path-file", str(p), "--r-list", "2,3",
                     "--out", str(out)]) == 0
    assert [float(r["V_r"]) for r in _rows(out / "variation.csv")] == [0.0, 0.0]


def test_carleson_delta_closed_form(tmp_path):
    sig = fio.write_signal_csv(tmp_path / "d.csv", SignalZ.delta())
    lam = fio.write_lambda_file(tmp_path / "l.txt", [0.0, 0.3, 0.77])
    cfg = tmp_path / "c.cfg"
    cfg.write_text("j_min = 2\nj_max = 7\n")
    out = tmp_path / "out"
    assert cli.main(["--experiment", "carleson", "--signal-file", str(sig), "--lambda-file", str(lam),
                     "--config", str(cfg), "--out", str(out)]) == 0
    for r in _rows(out / "carleson.csv"):
        n = abs(int(r["n"]))
        prime = n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))
        expect = math.log(n) / n if prime and n <= 128 else 0.0
        assert abs(float(r["value"]) - expect) <= 1e-15


@pytest.mark.parametrize("name", sorted(SMALL))
def test_cli_rerun_is_byte_identical(tmp_path, name):
    out = tmp_path / "a"
    assert cli.main(["--experiment", name, "--config", str(_cfg(tmp_path, name)), "--seed", "5",
                     "--out", str(out)]) == 0
    man = json.loads((out / "manifest.json").read_text())
    assert man["seed"] == 5 and man["experiment"] == name and man["outputs"]
    assert cli.main(["--manifest", str(out / "manifest.json"), "--out", str(tmp_path / "b")]) == 0
    for fname in man["outputs"]:
        assert (out / fname).read_bytes() == (tmp_path / "b" / fname).read_bytes()


def test_rerun_detects_changed_input(tmp_path):
    lam = fio.write_lambda_file(tmp_path / "l.txt", [0.1, 0.2])
    run_experiment("covering", load_config(_cfg(tmp_path, "covering")), 0, tmp_path / "a", {"lambda": lam})
    lam.write_text("0.1\n0.3\n")
    with pytest.raises(ValueError, match="changed"):
        rerun_manifest(tmp_path / "a" / "manifest.json", tmp_path / "b")


def test_cli_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("N = 3\n")
    assert cli.main(["--experiment", "covering", "--config", str(bad), "--out", str(tmp_path)]) == 2
    assert "bad.cfg:1" in capsys.readouterr().err
    assert cli.main(["--experiment", "variation", "--out", str(tmp_path)]) == 2
    with pytest.raises(SystemExit):
        cli.main(["--out", str(tmp_path)])


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "carleson_primes", "--experiment", "covering", "--config",
                          str(_cfg(tmp_path, "covering")), "--out", str(tmp_path / "o")],
                         capture_output=True, text=True, check=True)
    assert "covering_profile.csv" in json.loads(res.stdout)
