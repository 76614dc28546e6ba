from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sse_fd.constants import NS, V_PER_CM
from sse_fd.dynamics import Frame, Method, PropagationConfig, PureState2
from sse_fd.errors import DomainError, NoSteadyStateError
from sse_fd.lindblad import (
    DensityMatrix2,
    DissipationRates,
    bloch_generator,
    envelope_comparison,
    evolve_master,
    intensity,
    second_harmonic_generator,
    steady_state,
    steady_vs_longtime,
)
from sse_fd.model import DriveField, EffectiveParams, derive_drive_params, fig1_system


def lindblad_rhs(h, rho, Gamma, gamma):
    """Reference Lindblad right-hand side built from explicit operators."""
    s12 = np.array([[0, 1], [0, 0]], dtype=complex)  # |1><2|
    s22 = np.array([[0, 0], [0, 1]], dtype=complex)
    out = -1j * (h @ rho - rho @ h)
    for rate, op in ((Gamma, s12), (gamma, s22)):
        dag = op.conj().T
        out += rate * (op @ rho @ dag - 0.5 * (dag @ op @ rho + rho @ dag @ op))
    return out


def effective(omega_L=1.0, delta_prime=0.0):
    return EffectiveParams(0.0, 0.0, 0.0, 0.0, omega_L, delta_prime)


@settings(max_examples=50, deadline=None)
@given(
    h=st.tuples(*[st.floats(-3, 3)] * 4),
    rates=st.tuples(st.floats(0, 2), st.floats(0, 2)),
    r=st.tuples(st.floats(0, 1), st.floats(-1, 1), st.floats(-1, 1)),
)
def test_generator_matches_operator_form(h, rates, r):
    h11, h22, br, bi = h
    H = np.array([[h11, br - 1j * bi], [br + 1j * bi, h22]])
    p = r[0]
    c = 0.5 * math.sqrt(p * (1 - p)) * complex(r[1], r[2])
    rho = DensityMatrix2(1 - p, p, c)
    a = bloch_generator(h11, h22, complex(br, bi), DissipationRates(*rates))
    d = a @ rho.as_vector()
    ref = lindblad_rhs(H, rho.matrix(), *rates)
    np.testing.assert_allclose(d, [ref[0, 0].real, ref[1, 1].real, ref[1, 0].real, ref[1, 0].imag], atol=1e-12)


def test_density_matrix_validation():
    with pytest.raises(DomainError):
        DensityMatrix2(0.6, 0.6, 0)
    with pytest.raises(DomainError):
        DensityMatrix2(0.5, 0.5, 0.6)
    with pytest.raises(DomainError):
        DissipationRates(-1.0, 0.0)
    psi = PureState2(math.sqrt(0.3), math.sqrt(0.7) * 1j)
    rho = DensityMatrix2.from_pure(psi)
    np.testing.assert_allclose(rho.matrix(), np.outer(psi.as_array(), psi.as_array().conj()))


def test_steady_state_is_fixed_point():
    params = effective(0.3, 0.4)
    rates = DissipationRates(0.7, 1.1)
    for phi in (0.0, 0.9):
        ss = steady_state(params, rates, phi)
        a = second_harmonic_generator(params, rates, phi)
        np.testing.assert_allclose(a @ ss.as_vector(), 0.0, atol=1e-14)
        assert abs(ss.rho21) ** 2 == pytest.approx(intensity(0.3, rates.K, 0.7, 0.4), rel=1e-12)


def test_no_decay_has_no_steady_state():
    with pytest.raises(NoSteadyStateError):
        steady_state(effective(), DissipationRates(0.0, 1.0))


def test_longtime_limit_matches_closed_form():
    params = effective(0.1, 0.05)
    rates = DissipationRates(0.01, 0.01)
    res = steady_vs_longtime(params, rates)
    assert res.converged and res.max_abs_diff < 1e-6
    assert res.t_end == pytest.approx(20 / 0.01)


def test_fig1b_underdamped_and_enveloped(broken, fig1_drive):
    p = derive_drive_params(broken, fig1_drive)
    rates = DissipationRates(abs(p.Omega_L) / 10, abs(p.Omega_L) / 10)
    res = steady_vs_longtime(p, rates)
    assert res.max_abs_diff < 1e-6
    r22 = res.trajectory.rho22
    peaks = np.flatnonzero((r22[1:-1] > r22[:-2]) & (r22[1:-1] > r22[2:])) + 1
    assert len(peaks) >= 3 and r22[peaks[0]] > res.steady.rho22
    env = envelope_comparison(broken, fig1_drive, rates, 80 * NS)
    assert env.max_gap < 0.05


@settings(max_examples=100, deadline=None)
@given(
    om=st.floats(1e-3, 10),
    dp=st.floats(-20, 20),
    G=st.floats(1e-3, 5),
    g=st.floats(0, 5),
)
def test_steady_state_properties(om, dp, G, g):
    rates = DissipationRates(G, g)
    ss = steady_state(effective(om, dp), rates)
    assert 0 <= ss.rho22 < 0.5
    assert abs(ss.rho21) ** 2 <= ss.rho11 * ss.rho22 + 1e-15
    mirror = steady_state(effective(om, -dp), rates)
    assert abs(mirror.rho21) == pytest.approx(abs(ss.rho21), rel=1e-12)
    # larger drive never lowers the excited population
    assert steady_state(effective(2 * om, dp), rates).rho22 >= ss.rho22


@settings(max_examples=10, deadline=None)
@given(
    e_v_cm=st.floats(2.0, 15.0),
    ratio=st.floats(0.4, 0.6),
    G=st.floats(0.01, 2.0),
    g=st.floats(0.0, 2.0),
    p=st.floats(0.0, 1.0),
    phase=st.floats(0.0, 2 * math.pi),
    method=st.sampled_from([Method.FLOQUET, Method.DIRECT]),
)
def test_trace_and_positivity_randomised(e_v_cm, ratio, G, g, p, phase, method):
    sys_ = fig1_system()
    drive = DriveField(e_v_cm * V_PER_CM, ratio * sys_.omega_e)
    scale = 1e9
    rates = DissipationRates(G * scale, g * scale)
    c = math.sqrt(p * (1 - p)) * complex(math.cos(phase), math.sin(phase))
    init = DensityMatrix2(1 - p, p, c)
    cfg = PropagationConfig(t_end=0.5 * NS, output_samples=257, method=method)
    traj = evolve_master(sys_, drive, rates, init, cfg)
    trace = traj.rho11 + traj.rho22
    assert np.max(np.abs(trace - 1)) <= 1e-9
    lam = 0.5 - np.sqrt(0.25 * (traj.rho11 - traj.rho22) ** 2 + np.abs(traj.rho21) ** 2)
    assert lam.min() >= -1e-9


def test_frames_are_checked(broken, fig1_drive):
    p = derive_drive_params(broken, fig1_drive)
    rates = DissipationRates(1e8, 1e8)
    with pytest.raises(DomainError):
        evolve_master(None, fig1_drive, rates, DensityMatrix2.ground(), PropagationConfig(t_end=1e-9))
    with pytest.raises(DomainError):
        evolve_master(None, p, rates, DensityMatrix2.ground(), PropagationConfig(t_end=1e-9))
    cfg = PropagationConfig(t_end=1e-9, frame=Frame.SECOND_HARMONIC)
    traj = evolve_master(None, p, rates, DensityMatrix2.ground(), cfg)
    assert traj.rho22[0] == 0.0
