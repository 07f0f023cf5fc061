import subprocess
import sys

import pytest

from qstnoise.cli import EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, main

SMALL = """scenario.label = small
source.mean_photons = 200
channel.p_in_mw = 1
sweep.lengths_km = 0, 40
sample.n_theta = 2
sample.n_phi = 2
"""


@pytest.fixture
def small_cfg(tmp_path):
    p = tmp_path / "small.cfg"
    p.write_text(SMALL)
    return p


def test_simulate(small_cfg, tmp_path):
    out, svg = tmp_path / "r.csv", tmp_path / "r.svg"
    assert main(["simulate", "--config", str(small_cfg), "--out-csv", str(out), "--out-svg", str(svg)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert len(lines) == 3 and lines[1].startswith("small,0,")
    assert svg.read_text().count('class="marker"') == 2


def test_simulate_seed_override_and_threads(small_cfg, tmp_path):
    a, b, c = (tmp_path / f"{k}.csv" for k in "abc")
    assert main(["simulate", "--config", str(small_cfg), "--out-csv", str(a), "--seed", "9"]) == EXIT_OK
    assert main(["simulate", "--config", str(small_cfg), "--out-csv", str(b), "--seed", "9", "--threads", "2"]) == EXIT_OK
    assert main(["simulate", "--config", str(small_cfg), "--out-csv", str(c)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[1].endswith(",9")
    assert c.read_text().splitlines()[1].endswith(",42")


def test_validate(small_cfg, tmp_path, capsys):
    assert main(["validate", "--config", str(small_cfg)]) == EXIT_OK
    assert "ok: small" in capsys.readouterr().out
    bad = tmp_path / "bad.cfg"
    bad.write_text(SMALL + "channel.gamma_db_per_km = -1\n")
    assert main(["validate", "--config", str(bad)]) == EXIT_CONFIG
    assert "non-negative" in capsys.readouterr().err


def test_config_errors_exit_2(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("scenario.label = x\nwhat = 1\n")
    assert main(["simulate", "--config", str(bad), "--out-csv", str(tmp_path / "o.csv")]) == EXIT_CONFIG
    assert main(["validate", "--config", str(tmp_path / "absent.cfg")]) == EXIT_CONFIG


def test_io_error_exit_3(small_cfg, tmp_path):
    out = tmp_path / "no_such_dir" / "r.csv"
    assert main(["simulate", "--config", str(small_cfg), "--out-csv", str(out)]) == EXIT_RUNTIME


def test_usage_error_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["preset", "--name", "fig9", "--out-csv", "x.csv"])
    assert info.value.code == 2


def test_reconstruct(capsys):
    assert main(["reconstruct", "--counts", "39,11,11,39", "--mean-photons", "100", "--length-km", "0"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "rho[0][0] = +0.98" in out
    assert "converged = true" in out
    assert "transmittance = 1" in out


def test_reconstruct_attenuated(capsys):
    args = ["reconstruct", "--counts", "25,25,25,25", "--mean-photons", "1000", "--length-km", "50", "--gamma", "0.2"]
    assert main(args) == EXIT_OK
    out = capsys.readouterr().out
    assert "transmittance = 0.1" in out
    assert "rho[0][0] = +0.500000000" in out


@pytest.mark.parametrize("counts", ["1,2,3", "1,2,x,4", "1,2,3,-4"])
def test_reconstruct_bad_counts(counts):
    assert main(["reconstruct", "--counts", counts, "--mean-photons", "100", "--length-km", "0"]) == EXIT_CONFIG


def test_reconstruct_bad_physics():
    assert main(["reconstruct", "--counts", "1,2,3,4", "--mean-photons", "0", "--length-km", "0"]) == EXIT_CONFIG
    assert main(["reconstruct", "--counts", "1,2,3,4", "--mean-photons", "10", "--length-km", "-5"]) == EXIT_CONFIG


def test_module_entry_point(small_cfg):
    proc = subprocess.run(
        [sys.executable, "-m", "qstnoise", "validate", "--config", str(small_cfg)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "ok: small" in proc.stdout
