"""Acceptance gate: one test per criterion, summarised at the end of the run."""

from __future__ import annotations

import math
import warnings

import numpy as np
import pytest

from sse_fd.cli import main
from sse_fd.config import ScenarioConfig
from sse_fd.constants import GRAD_S, NS, R_B, RYDBERG, V_PER_CM
from sse_fd.dynamics import Method, PropagationConfig, PureState2, compare_exact_vs_effective, propagate_lab
from sse_fd.hydrogenic import (
    SurfaceStateBasis,
    analytic_energy,
    dipole_matrix_element,
    grid_eigensolve,
    stark_slope,
)
from sse_fd.lindblad import (
    DensityMatrix2,
    DissipationRates,
    envelope_comparison,
    evolve_master,
    steady_vs_longtime,
)
from sse_fd.model import DriveField, EffectiveParams, derive_drive_params, fig1_system, resonant_drive
from sse_fd.radiation import intensity_lorentzian, spectrum_from_dynamics

pytestmark = pytest.mark.acceptance

FIELD = 15 * V_PER_CM


def test_criterion_1_effective_parameters():
    sys_ = fig1_system()
    assert sys_.z12 == pytest.approx(0.5 * R_B) and sys_.dz == pytest.approx(2.3 * R_B)
    p = derive_drive_params(sys_, resonant_drive(sys_, FIELD))
    assert abs(p.Delta_prime) < 1e-5 * abs(p.Omega_L)
    assert p.Omega_R / GRAD_S == pytest.approx(4.3, rel=0.05)
    assert p.Omega_tilde / GRAD_S == pytest.approx(10.0, rel=0.05)
    assert p.Omega_L / GRAD_S == pytest.approx(0.8, rel=0.10)


def test_criterion_2_like_rabi_oscillation():
    cfg = ScenarioConfig.preset("fig1a")
    sys_, drive = cfg.system(), cfg.drive()
    om_l = abs(cfg.params().Omega_L)
    cmp = compare_exact_vs_effective(sys_, drive, cfg.propagation())
    first = cmp.exact.times <= math.pi / om_l
    assert cmp.exact.rho22[first].max() > 0.9
    assert abs(cmp.frequency_exact - om_l) / om_l < 0.15
    assert cmp.deviation_within(2 * math.pi / om_l) < 0.15


def test_criterion_3_rwa_self_convergence():
    sys_ = fig1_system()
    gaps = []
    for scale in (1.0, 0.5, 0.25):
        drive = resonant_drive(sys_, FIELD * scale)
        om_l = abs(derive_drive_params(sys_, drive).Omega_L)
        # two like-Rabi periods on a grid of 16 samples per drive period
        periods = int(round(2 * math.pi / om_l / (2 * math.pi / drive.omega_l)))
        cfg = PropagationConfig(t_end=periods * 2 * math.pi / drive.omega_l, output_samples=16 * periods + 1)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            gaps.append(compare_exact_vs_effective(sys_, drive, cfg).max_deviation)
    assert gaps[0] > gaps[1] > gaps[2], gaps


def test_criterion_4_natural_atom_null():
    cfg = ScenarioConfig.preset("natural-atom")
    traj = propagate_lab(cfg.system(), cfg.drive(), PureState2.ground(), cfg.propagation())
    assert traj.rho22.max() <= 0.012


def test_criterion_5_damped_oscillation_and_steady_state():
    cfg = ScenarioConfig.preset("fig1b")
    sys_, drive, params = cfg.system(), cfg.drive(), cfg.params()
    rates = cfg.rates(params)
    assert rates.Gamma == rates.gamma == pytest.approx(abs(params.Omega_L) / 10)
    res = steady_vs_longtime(params, rates, phase_phi=drive.phase_phi)
    assert res.max_abs_diff < 1e-6
    r22 = res.trajectory.rho22
    peaks = np.flatnonzero((r22[1:-1] > r22[:-2]) & (r22[1:-1] > r22[2:])) + 1
    assert len(peaks) >= 3, "not underdamped"
    env = envelope_comparison(sys_, drive, rates, cfg.propagation().t_end)
    assert env.max_gap < 0.05


def test_criterion_6_lorentzian_lineshape():
    rates = DissipationRates(1.0, 1.0)  # Gamma = gamma, K = 1

    def curve(x):
        return intensity_lorentzian(EffectiveParams(0, 0, 0, 0, x, 0), rates, (-5, 5), 201)

    curves = {x: curve(x) for x in (0.1, 0.2, 0.3)}
    for c in curves.values():
        np.testing.assert_allclose(c.intensity, c.intensity[::-1], rtol=1e-12)
        assert np.argmax(c.intensity) == 100 and c.detuning_axis[100] == 0
    assert np.all(curves[0.1].intensity < curves[0.2].intensity)
    assert np.all(curves[0.2].intensity < curves[0.3].intensity)
    # closed-form steady coherence at x = 0.1, d = 0: x^2 / (1 + 4 x^2)^2
    oracle = 0.01 / 1.04**2
    assert curves[0.1].intensity[100] == pytest.approx(oracle, rel=1e-12)
    assert curves[0.1].intensity[100] == pytest.approx(9.26e-3, rel=0.01)
    for x in (0.02, 0.05, 0.1):
        c = curve(x)
        np.testing.assert_allclose(c.intensity_approx, c.intensity, rtol=0.01)


def test_criterion_7_frequency_doubling_spectrum():
    power = {}
    for name in ("fig1b", "natural-atom"):
        cfg = ScenarioConfig.preset(name)
        drive = cfg.drive()
        prop, settle = cfg.spectrum_propagation(drive)
        rep = spectrum_from_dynamics(cfg.system(), drive, prop, cfg.rates(), settle)
        power[name] = rep.power_at(2 * drive.omega_l)
        if name == "fig1b":
            assert abs(rep.dominant_omega - 2 * drive.omega_l) <= rep.bin_width
    assert 10 * math.log10(power["fig1b"] / power["natural-atom"]) >= 20


def test_criterion_8_hydrogenic_oracle():
    assert dipole_matrix_element(1, 1) / R_B == pytest.approx(1.5, rel=1e-8)
    assert dipole_matrix_element(2, 2) / R_B == pytest.approx(6.0, rel=1e-8)
    assert abs(dipole_matrix_element(1, 2)) / R_B == pytest.approx(32 * math.sqrt(2) / 81, rel=1e-8)
    assert abs(dipole_matrix_element(1, 2)) / R_B == pytest.approx(0.5587, rel=1e-4)
    sol = grid_eigensolve(SurfaceStateBasis.default(n_max=3))
    for n in (1, 2, 3):
        assert sol.energies[n - 1] == pytest.approx(analytic_energy(n), rel=1e-3)
        assert analytic_energy(n) == -RYDBERG / n**2
    st = stark_slope(SurfaceStateBasis.default(n_max=2))
    assert st.slope / 1e9 == pytest.approx(0.8, rel=0.10)


def test_criterion_9_property_suites(tmp_path):
    rng = np.random.default_rng(20261016)
    sys_ = fig1_system()
    for k in range(6):
        drive = DriveField(rng.uniform(2, 15) * V_PER_CM, rng.uniform(0.4, 0.6) * sys_.omega_e, rng.uniform(0, 2 * math.pi))
        method = (Method.FLOQUET, Method.DIRECT)[k % 2]
        cfg = PropagationConfig(t_end=0.5 * NS, output_samples=257, method=method)
        # unitarity
        a, b = rng.normal(size=2) + 1j * rng.normal(size=2)
        n = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
        traj = propagate_lab(sys_, drive, PureState2(a / n, b / n), cfg)
        assert np.max(np.abs(np.sum(np.abs(traj.states) ** 2, axis=1) - 1)) <= 1e-9
        # trace and positivity
        rates = DissipationRates(*rng.uniform(0.01, 2.0, size=2) * 1e9)
        traj = evolve_master(sys_, drive, rates, DensityMatrix2.from_pure(PureState2(a / n, b / n)), cfg)
        assert np.max(np.abs(traj.rho11 + traj.rho22 - 1)) <= 1e-9
        lam = 0.5 - np.sqrt(0.25 * (traj.rho11 - traj.rho22) ** 2 + np.abs(traj.rho21) ** 2)
        assert lam.min() >= -1e-9
    # sweep determinism across worker counts
    args = ["sweep", "--preset", "fig2", "--set", "sweep.parameter=lineshape.delta_prime_over_K",
            "--set", "sweep.min=-5", "--set", "sweep.max=5", "--set", "sweep.count=101"]
    assert main([*args, "--workers", "1", "--out", str(tmp_path / "w1")]) == 0
    assert main([*args, "--workers", "8", "--out", str(tmp_path / "w8")]) == 0
    assert (tmp_path / "w1" / "sweep.csv").read_bytes() == (tmp_path / "w8" / "sweep.csv").read_bytes()
