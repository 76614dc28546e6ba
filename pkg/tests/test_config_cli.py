from __future__ import annotations

import csv
import json
import subprocess
import sys

import pytest

from sse_fd.cli import main
from sse_fd.config import PRESETS, ScenarioConfig
from sse_fd.constants import GRAD_S
from sse_fd.errors import ConfigError


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def read_report(path):
    out = {}
    for line in path.read_text().splitlines():
        k, _, v = line.partition(" = ")
        out[k] = v
    return out


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_parse(name):
    cfg = ScenarioConfig.preset(name)
    assert cfg.source == f"preset:{name}"


def test_unknown_key_reports_line():
    text = "[system]\nomega_e = 220\nomgea = 3\n"
    with pytest.raises(ConfigError, match=r"line 3.*system\.omgea"):
        ScenarioConfig.from_text(text)


def test_bad_value_and_section():
    with pytest.raises(ConfigError, match="bad value for drive.E"):
        ScenarioConfig.from_text("[drive]\nE = fast\n")
    with pytest.raises(ConfigError, match="unknown section"):
        ScenarioConfig.from_text("[server]\nport = 80\n")
    with pytest.raises(ConfigError, match="mutually exclusive"):
        ScenarioConfig.from_text("[rates]\nGamma = 1\nGamma_per_Omega_L = 0.1\n")
    with pytest.raises(ConfigError):
        ScenarioConfig.from_text("[sweep]\nparameter = propagation.samples\n")


def test_rates_scale_with_coupling():
    cfg = ScenarioConfig.preset("fig1b")
    p = cfg.params()
    r = cfg.rates(p)
    assert r.Gamma == pytest.approx(abs(p.Omega_L) / 10)
    assert r.K == pytest.approx(abs(p.Omega_L) / 10)


def test_natural_atom_rates_match_broken_run():
    nat = ScenarioConfig.preset("natural-atom")
    broken = ScenarioConfig.preset("fig1b")
    assert nat.rates().Gamma == pytest.approx(broken.rates().Gamma, rel=1e-6)


def test_lineshape_units():
    cfg = ScenarioConfig.preset("fig2").with_value("lineshape.Gamma_over_gamma", "3")
    params, rates = cfg.lineshape_model()
    assert rates.K == pytest.approx(1.0)
    assert rates.Gamma / rates.gamma == pytest.approx(3.0)


def test_snapshot_round_trip(tmp_path):
    cfg = ScenarioConfig.preset("fig1b").with_value("drive.phase", "0.3")
    again = ScenarioConfig.from_snapshot(json.loads(json.dumps(cfg.snapshot())))
    assert again.values == cfg.values and again.present == cfg.present


def test_params_command(capsys):
    assert main(["params", "--preset", "fig1a"]) == 0
    out = dict(line.split(" = ") for line in capsys.readouterr().out.splitlines())
    assert float(out["Omega_R_Grad_s"]) == pytest.approx(4.3, rel=0.05)
    assert float(out["Omega_tilde_Grad_s"]) == pytest.approx(10, rel=0.05)
    assert float(out["Omega_L_Grad_s"]) == pytest.approx(0.8, rel=0.1)
    assert float(out["delta_exact_Grad_s"]) == pytest.approx(float(out["delta_closed_form_Grad_s"]), rel=1e-4)


def test_params_zero_field_and_warning(capsys):
    assert main(["params", "--set", "drive.E=0"]) == 0
    out = dict(line.split(" = ") for line in capsys.readouterr().out.splitlines())
    assert float(out["Omega_R_Grad_s"]) == 0 and float(out["Omega_L_Grad_s"]) == 0
    assert main(["params", "--set", "drive.E=20"]) == 0
    assert "weak-drive ratio" in capsys.readouterr().err


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.ini"
    bad.write_text("[system]\nz12 = nope\n")
    assert main(["params", "--config", str(bad)]) == 2
    assert "line 2" in capsys.readouterr().err
    assert main(["params", "--config", str(tmp_path / "missing.ini")]) == 2
    assert main(["params", "--set", "system.z12=0"]) == 2
    # drive far beyond the expansion: numerical/regime failure
    assert main(["params", "--set", "drive.E=1e7"]) == 3
    # spectrum window shorter than 20 like-Rabi periods
    assert main(["spectrum", "--preset", "fig1b", "--set", "spectrum.t_end=60",
                 "--set", "spectrum.settle=10", "--out", str(tmp_path / "s")]) == 3


def test_rabi_command(tmp_path):
    out = tmp_path / "rabi"
    assert main(["rabi", "--preset", "fig1a", "--out", str(out)]) == 0
    rows = read_csv(out / "trajectory.csv")
    assert list(rows[0]) == ["t_ns", "rho22", "re_c1", "im_c1", "re_c2", "im_c2"]
    assert max(float(r["rho22"]) for r in rows) > 0.9
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "rabi"
    assert set(manifest["outputs"]) == {"trajectory.csv", "effective.csv", "comparison.txt"}
    assert manifest["derived"]["Omega_L"] / GRAD_S == pytest.approx(0.8, rel=0.1)


def test_manifest_reproduces_run(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["lindblad", "--preset", "fig1b", "--set", "propagation.t_end=10",
                 "--set", "propagation.samples=501", "--out", str(a)]) == 0
    assert main(["lindblad", "--config", str(a / "manifest.json"), "--out", str(b)]) == 0
    assert (a / "trajectory.csv").read_bytes() == (b / "trajectory.csv").read_bytes()
    rows = read_csv(a / "trajectory.csv")
    assert list(rows[0]) == ["t_ns", "rho11", "rho22", "re_rho21", "im_rho21"]


def test_steady_command(tmp_path):
    out = tmp_path / "st"
    assert main(["steady", "--preset", "fig2", "--omega-L-over-K", "0.1", "--out", str(out)]) == 0
    rep = read_report(out / "steady.txt")
    assert float(rep["peak_intensity"]) == pytest.approx(9.26e-3, rel=0.01)
    rows = read_csv(out / "intensity.csv")
    assert list(rows[0]) == ["delta_prime_over_K", "intensity_exact", "intensity_eq15"]
    assert len(rows) == 201


def test_steady_physical_units(tmp_path):
    out = tmp_path / "st"
    assert main(["steady", "--preset", "fig1b", "--out", str(out)]) == 0
    rep = read_report(out / "steady.txt")
    assert rep["units"] == "rad/s"
    assert float(rep["polarization_amplitude_Cm"]) > 0


def test_hydrogenic_report(capsys, tmp_path):
    assert main(["hydrogenic", "--report"]) == 0
    out = dict(line.split(" = ") for line in capsys.readouterr().out.splitlines())
    assert float(out["z11_rB"]) == pytest.approx(1.5, rel=1e-8)
    assert float(out["z22_rB"]) == pytest.approx(6.0, rel=1e-8)
    assert float(out["abs_z12_rB"]) == pytest.approx(0.5587, rel=1e-4)
    assert main(["hydrogenic", "--out", str(tmp_path / "h")]) == 0
    header = (tmp_path / "h" / "wavefunctions.csv").read_text().splitlines()[0]
    assert header == "z_m,psi1,psi2,psi3"


def test_spectrum_command(tmp_path):
    out = tmp_path / "sp"
    assert main(["spectrum", "--preset", "fig1b", "--out", str(out)]) == 0
    rep = read_report(out / "spectrum.txt")
    assert float(rep["dominant_over_omega_l"]) == pytest.approx(2.0, abs=1e-3)
    header = (out / "spectrum.csv").read_text().splitlines()[0]
    assert header == "omega_rad_per_s,power_rel"


def test_console_script_entry_point(tmp_path):
    res = subprocess.run(
        [sys.executable, "-m", "sse_fd.cli", "params", "--preset", "fig1a"],
        capture_output=True, text=True, check=False,
    )
    assert res.returncode == 0 and "Omega_L_Grad_s" in res.stdout
