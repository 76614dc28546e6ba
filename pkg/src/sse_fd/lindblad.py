"""Dissipative two-level dynamics: master-equation integration and steady state.

Decay ``|2> -> |1>`` at rate ``Gamma`` (jump operator ``s12``) and pure
dephasing at rate ``gamma`` (jump operator ``s22``) give the coherence decay
rate ``K = (Gamma + gamma)/2``. The density matrix is carried as the real
vector ``(rho11, rho22, Re rho21, Im rho21)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _ode
from .dynamics import Frame, Method, PropagationConfig, PureState2, Trajectory, lab_hamiltonian
from .errors import AccuracyError, DomainError, NoSteadyStateError
from .model import DriveField, EffectiveParams, TwoLevelSystem, derive_drive_params
from .spectral import period_average

TRACE_BUDGET = 1e-9
POSITIVITY_BUDGET = 1e-9


@dataclass(frozen=True)
class DensityMatrix2:
    rho11: float
    rho22: float
    rho21: complex

    def __post_init__(self):
        if abs(self.rho11 + self.rho22 - 1.0) > TRACE_BUDGET:
            raise DomainError(f"trace {self.rho11 + self.rho22!r} differs from 1")
        if abs(self.rho21) ** 2 > self.rho11 * self.rho22 + POSITIVITY_BUDGET:
            raise DomainError("density matrix is not positive")

    @classmethod
    def ground(cls) -> "DensityMatrix2":
        return cls(1.0, 0.0, 0j)

    @classmethod
    def excited(cls) -> "DensityMatrix2":
        return cls(0.0, 1.0, 0j)

    @classmethod
    def from_pure(cls, psi: PureState2) -> "DensityMatrix2":
        return cls(abs(psi.c1) ** 2, abs(psi.c2) ** 2, psi.c2 * np.conj(psi.c1))

    def matrix(self) -> np.ndarray:
        r21 = complex(self.rho21)
        return np.array([[self.rho11, r21.conjugate()], [r21, self.rho22]], dtype=complex)

    def as_vector(self) -> np.ndarray:
        r21 = complex(self.rho21)
        return np.array([self.rho11, self.rho22, r21.real, r21.imag])


@dataclass(frozen=True)
class DissipationRates:
    Gamma: float
    gamma: float

    def __post_init__(self):
        if not (self.Gamma >= 0 and self.gamma >= 0):
            raise DomainError("rates must be non-negative")

    @property
    def K(self) -> float:
        return 0.5 * (self.Gamma + self.gamma)


def bloch_generator(h11: float, h22: float, h21: complex, rates: DissipationRates) -> np.ndarray:
    """Real 4x4 generator for ``(rho11, rho22, Re rho21, Im rho21)``.

    ``h**`` are entries of ``H/hbar``; ``h12 = conj(h21)``.
    """
    br, bi = h21.real, h21.imag
    w = h22 - h11
    G, K = rates.Gamma, rates.K
    return np.array(
        [
            [0.0, G, -2 * bi, 2 * br],
            [0.0, -G, 2 * bi, -2 * br],
            [bi, -bi, -K, w],
            [-br, br, -w, -K],
        ]
    )


def second_harmonic_generator(params: EffectiveParams, rates, phase_phi: float) -> np.ndarray:
    h21 = -params.Omega_L * complex(math.cos(2 * phase_phi), -math.sin(2 * phase_phi))
    d = params.Delta_prime / 2
    return bloch_generator(-d, d, h21, rates)


def _lab_generator(sys: TwoLevelSystem, drive: DriveField, rates: DissipationRates):
    h = lab_hamiltonian(sys, drive)
    # only the time-dependent entries change between calls
    base = bloch_generator(0.0, 0.0, 0j, rates)

    def gen(t):
        m = h(t)
        br, w = m[1, 0].real, 2 * m[1, 1].real
        a = base.copy()
        a[0, 3], a[1, 3] = 2 * br, -2 * br
        a[3, 0], a[3, 1] = -br, br
        a[2, 3], a[3, 2] = w, -w
        return a

    return gen


def _to_trajectory(t, y) -> Trajectory:
    trace_err = float(np.max(np.abs(y[:, 0] + y[:, 1] - 1.0)))
    if trace_err > TRACE_BUDGET:
        raise AccuracyError(f"trace drift {trace_err:.2e}", achieved=trace_err)
    half_gap = 0.5 * (y[:, 0] - y[:, 1])
    lam_min = 0.5 * (y[:, 0] + y[:, 1]) - np.sqrt(half_gap**2 + y[:, 2] ** 2 + y[:, 3] ** 2)
    worst = float(lam_min.min())
    if worst < -POSITIVITY_BUDGET:
        raise AccuracyError(f"positivity violated: eigenvalue {worst:.2e}", achieved=worst)
    return Trajectory(times=t, rho22=y[:, 1], rho11=y[:, 0], rho21=y[:, 2] + 1j * y[:, 3])


def evolve_master(
    sys: TwoLevelSystem | None,
    drive_or_params: DriveField | EffectiveParams,
    rates: DissipationRates,
    init: DensityMatrix2,
    cfg: PropagationConfig,
    phase_phi: float = 0.0,
) -> Trajectory:
    """Integrate the master equation.

    A :class:`DriveField` selects the lab-frame Hamiltonian (``sys``
    required, ``cfg.frame`` must be ``lab``); :class:`EffectiveParams`
    selects the second-harmonic effective Hamiltonian with detuning
    ``Delta_prime`` and drive phase ``phase_phi``.
    """
    t = cfg.times
    y0 = init.as_vector()
    if isinstance(drive_or_params, DriveField):
        if sys is None or cfg.frame is not Frame.LAB:
            raise DomainError("lab-frame master equation needs sys and frame 'lab'")
        gen = _lab_generator(sys, drive_or_params, rates)
        if cfg.method is Method.FLOQUET:
            period = 2 * math.pi / drive_or_params.omega_l
            y = _ode.integrate_floquet(gen, period, y0, t, cfg.rel_tol, cfg.abs_tol)
        else:
            y = _ode.integrate_direct(gen, y0, t, cfg.rel_tol, cfg.abs_tol)
    elif isinstance(drive_or_params, EffectiveParams):
        if cfg.frame is not Frame.SECOND_HARMONIC:
            raise DomainError("effective master equation needs frame 'second_harmonic'")
        a = second_harmonic_generator(drive_or_params, rates, phase_phi)
        y = _ode.integrate_direct(lambda _t: a, y0, t, cfg.rel_tol, cfg.abs_tol)
    else:
        raise TypeError("drive_or_params must be DriveField or EffectiveParams")
    return _to_trajectory(t, y)


def steady_state(
    params: EffectiveParams,
    rates: DissipationRates,
    phase_phi: float = 0.0,
) -> DensityMatrix2:
    """Closed-form fixed point of the second-harmonic master equation."""
    om, G, K, dp = params.Omega_L, rates.Gamma, rates.K, params.Delta_prime
    if G == 0:
        raise NoSteadyStateError(
            "no decay (Gamma = 0): populations are not balanced by relaxation"
        )
    lor = K * K + dp * dp
    rho22 = 2 * om * om * K / (G * lor + 4 * om * om * K)
    rho11 = 1.0 - rho22
    phase = complex(math.cos(2 * phase_phi), -math.sin(2 * phase_phi))
    rho21 = om * phase * (rho11 - rho22) * complex(dp, K) / lor
    return DensityMatrix2(rho11, rho22, rho21)


def intensity(omega_L, K, Gamma, delta_prime):
    """Steady ``|rho21|**2``, vectorised over ``delta_prime``."""
    delta_prime = np.asarray(delta_prime, dtype=float)
    lor = K * K + delta_prime**2
    denom = Gamma * lor + 4 * omega_L**2 * K
    return omega_L**2 * Gamma**2 * lor / denom**2


@dataclass(frozen=True)
class SteadyConsistency:
    max_abs_diff: float
    converged: bool
    t_end: float
    steady: DensityMatrix2
    final: DensityMatrix2
    trajectory: Trajectory = field(repr=False)


def steady_vs_longtime(
    params: EffectiveParams,
    rates: DissipationRates,
    cfg: PropagationConfig | None = None,
    phase_phi: float = 0.0,
    init: DensityMatrix2 | None = None,
    tolerance: float = 1e-6,
) -> SteadyConsistency:
    """Integrate to ``20 / min(Gamma, K)`` and compare with :func:`steady_state`.

    ``cfg`` supplies tolerances and the sample count; its ``t_end`` is
    replaced by the relaxation budget.
    """
    if not rates.Gamma > 0:
        raise DomainError("need Gamma > 0")
    t_end = 20.0 / min(rates.Gamma, rates.K)
    base = cfg or PropagationConfig(t_end=t_end)
    run_cfg = PropagationConfig(
        t_end=t_end,
        output_samples=base.output_samples,
        rel_tol=base.rel_tol,
        abs_tol=base.abs_tol,
        frame=Frame.SECOND_HARMONIC,
    )
    traj = evolve_master(None, params, rates, init or DensityMatrix2.ground(), run_cfg, phase_phi)
    ss = steady_state(params, rates, phase_phi)
    final = DensityMatrix2(
        float(traj.rho11[-1]), float(traj.rho22[-1]), complex(traj.rho21[-1])
    )
    diff = float(np.max(np.abs(final.as_vector() - ss.as_vector())))
    return SteadyConsistency(diff, diff < tolerance, t_end, ss, final, traj)


@dataclass(frozen=True)
class EnvelopeComparison:
    max_gap: float
    times: np.ndarray = field(repr=False)
    lab_envelope: np.ndarray = field(repr=False)
    effective_rho22: np.ndarray = field(repr=False)
    lab: Trajectory = field(repr=False)


def envelope_comparison(
    sys: TwoLevelSystem,
    drive: DriveField,
    rates: DissipationRates,
    t_end: float,
    samples_per_period: int = 32,
    rel_tol: float = 1e-12,
    abs_tol: float = 1e-14,
) -> EnvelopeComparison:
    """Lab-frame ``rho22`` averaged over one drive period against the effective model.

    The run is shortened to a whole number of drive periods so the averaging
    window always spans exactly one period.
    """
    period = 2 * math.pi / drive.omega_l
    n = int(t_end / period)
    if n < 2:
        raise DomainError("t_end must cover at least two drive periods")
    samples = n * samples_per_period + 1
    lab_cfg = PropagationConfig(n * period, samples, rel_tol, abs_tol, Frame.LAB, Method.FLOQUET)
    eff_cfg = PropagationConfig(n * period, samples, rel_tol, abs_tol, Frame.SECOND_HARMONIC)
    params = derive_drive_params(sys, drive)
    lab = evolve_master(sys, drive, rates, DensityMatrix2.ground(), lab_cfg)
    eff = evolve_master(None, params, rates, DensityMatrix2.ground(), eff_cfg, drive.phase_phi)
    env = period_average(lab.rho22, samples_per_period)
    half = samples_per_period // 2
    ref = eff.rho22[half:-half]
    return EnvelopeComparison(
        max_gap=float(np.max(np.abs(env - ref))),
        times=lab.times[half:-half],
        lab_envelope=env,
        effective_rho22=ref,
        lab=lab,
    )
