"""Unitary dynamics of the driven two-level electron.

The lab-frame Hamiltonian (identity part dropped) is::

    H/hbar = (omega_e/2) sz - 2 [Omega_tilde sz + Omega_R sx] cos(omega_l t + phi)

with ``sz = |2><2| - |1><1|``. The factor 2 follows from expanding
``-e z E cos(...)`` in the two-level basis with ``Omega_R = z12 e E / 2hbar``
and ``Omega_tilde = (z22 - z11) e E / 4hbar``; it is the normalisation for
which resonant driving gives ``rho22 = sin^2(Omega_R t)``.

The effective frames are solved in closed form:

* ``rwa``: ``Delta/2 sz - Omega_R (e^{i phi} s12 + h.c.)`` near ``omega_l = omega_e``,
* ``second_harmonic``: ``Delta'/2 sz - Omega_L (e^{2 i phi} s12 + h.c.)``
  near ``omega_l = omega_e / 2``.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _ode
from .errors import AccuracyError, DomainError
from .model import (
    DriveField,
    EffectiveParams,
    TwoLevelSystem,
    derive_drive_params,
    rabi_frequency,
    stark_coupling,
    weak_drive_ratio,
)
from .spectral import dominant_frequency

NORM_BUDGET = 1e-9


class Frame(str, enum.Enum):
    LAB = "lab"
    RWA = "rwa"
    SECOND_HARMONIC = "second_harmonic"


class Method(str, enum.Enum):
    DIRECT = "direct"
    FLOQUET = "floquet"


@dataclass(frozen=True)
class PureState2:
    c1: complex
    c2: complex

    def __post_init__(self):
        norm = abs(self.c1) ** 2 + abs(self.c2) ** 2
        if abs(norm - 1.0) > NORM_BUDGET:
            raise DomainError(f"state not normalised: |c1|^2+|c2|^2 = {norm!r}")

    @classmethod
    def ground(cls) -> "PureState2":
        return cls(1.0 + 0j, 0j)

    @classmethod
    def excited(cls) -> "PureState2":
        return cls(0j, 1.0 + 0j)

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2], dtype=complex)


@dataclass(frozen=True)
class PropagationConfig:
    """Output grid and integrator settings.

    ``method`` only matters for the lab frame, where ``floquet`` integrates a
    single drive period and ``direct`` the whole span.
    """

    t_end: float
    output_samples: int = 2001
    rel_tol: float = 1e-12
    abs_tol: float = 1e-14
    frame: Frame = Frame.LAB
    method: Method = Method.FLOQUET

    def __post_init__(self):
        object.__setattr__(self, "frame", Frame(self.frame))
        object.__setattr__(self, "method", Method(self.method))
        if not self.t_end > 0:
            raise DomainError("t_end must be positive")
        if self.output_samples < 2:
            raise DomainError("output_samples must be >= 2")
        if not (0 < self.rel_tol <= 1e-8 and self.abs_tol > 0):
            raise DomainError("need 0 < rel_tol <= 1e-8 and abs_tol > 0")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_end, self.output_samples)


@dataclass(frozen=True)
class Trajectory:
    """Time series on a uniform grid.

    ``states`` holds ``(c1, c2)`` rows for pure-state runs; ``rho11`` and
    ``rho21`` are filled by density-matrix runs.
    """

    times: np.ndarray
    rho22: np.ndarray
    states: np.ndarray | None = field(default=None, repr=False)
    rho11: np.ndarray | None = field(default=None, repr=False)
    rho21: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if np.any(np.diff(self.times) <= 0):
            raise DomainError("times must be strictly increasing")


def lab_hamiltonian(sys: TwoLevelSystem, drive: DriveField):
    """``t -> H(t)/hbar`` as a 2x2 complex matrix in the (|1>, |2>) basis."""
    half = 0.5 * sys.omega_e
    two_ot = 2.0 * stark_coupling(sys, drive.amplitude_E)
    two_or = 2.0 * rabi_frequency(sys, drive.amplitude_E)
    wl, phi = drive.omega_l, drive.phase_phi

    def h(t):
        c = math.cos(wl * t + phi)
        d = half - two_ot * c
        b = -two_or * c
        return np.array([[-d, b], [b, d]], dtype=complex)

    return h


def propagate_lab(
    sys: TwoLevelSystem,
    drive: DriveField,
    init: PureState2,
    cfg: PropagationConfig,
) -> Trajectory:
    """Schrodinger propagation of the full lab-frame Hamiltonian.

    Raises :class:`AccuracyError` if the norm drifts by more than ``1e-9``.
    """
    if cfg.frame is not Frame.LAB:
        raise DomainError(f"propagate_lab needs frame 'lab', got {cfg.frame.value!r}")
    h = lab_hamiltonian(sys, drive)

    def gen(t):
        return -1j * h(t)

    t = cfg.times
    if cfg.method is Method.FLOQUET:
        period = 2 * math.pi / drive.omega_l
        y = _ode.integrate_floquet(gen, period, init.as_array(), t, cfg.rel_tol, cfg.abs_tol)
    else:
        y = _ode.integrate_direct(gen, init.as_array(), t, cfg.rel_tol, cfg.abs_tol)
    pops = np.abs(y) ** 2
    drift = float(np.max(np.abs(pops.sum(axis=1) - 1.0)))
    if drift > NORM_BUDGET:
        raise AccuracyError(f"norm drift {drift:.2e} exceeds {NORM_BUDGET:g}", achieved=drift)
    return Trajectory(times=t, rho22=pops[:, 1], states=y)


def rabi_propagator(detuning: float, coupling: float, phase: float, t):
    """Closed-form ``U(t)`` for ``detuning/2 sz - coupling (e^{i phase} s12 + h.c.)``.

    Returns an array of shape ``(len(t), 2, 2)``.
    """
    t = np.asarray(t, dtype=float)
    h = np.array(
        [
            [-detuning / 2, -coupling * np.exp(1j * phase)],
            [-coupling * np.exp(-1j * phase), detuning / 2],
        ]
    )
    w = math.sqrt(coupling**2 + detuning**2 / 4)
    cos = np.cos(w * t)[:, None, None]
    # sin(wt)/w with the w -> 0 limit t
    sinc = (t * np.sinc(w * t / math.pi))[:, None, None]
    return cos * np.eye(2) - 1j * sinc * h


def propagate_effective(
    params: EffectiveParams,
    phase_phi: float,
    init: PureState2,
    cfg: PropagationConfig,
) -> Trajectory:
    """Generalised Rabi solution in the resonant or second-harmonic frame."""
    if cfg.frame is Frame.RWA:
        detuning, coupling, phase = params.Delta, params.Omega_R, phase_phi
    elif cfg.frame is Frame.SECOND_HARMONIC:
        detuning, coupling, phase = params.Delta_prime, params.Omega_L, 2 * phase_phi
    else:
        raise DomainError("propagate_effective needs an effective frame")
    t = cfg.times
    y = rabi_propagator(detuning, coupling, phase, t) @ init.as_array()
    return Trajectory(times=t, rho22=np.abs(y[:, 1]) ** 2, states=y)


@dataclass(frozen=True)
class Comparison:
    max_deviation: float
    frequency_exact: float  # Rabi-like frequency, half the rho22 line
    frequency_effective: float
    frequency_mismatch: float  # relative
    xi: float
    exact: Trajectory = field(repr=False)
    effective: Trajectory = field(repr=False)
    warnings: tuple[str, ...] = ()

    def deviation_within(self, t_max: float) -> float:
        """Largest ``|rho22_exact - rho22_eff|`` for ``t <= t_max``."""
        m = self.exact.times <= t_max * (1 + 1e-12)
        return float(np.max(np.abs(self.exact.rho22[m] - self.effective.rho22[m])))


def compare_exact_vs_effective(
    sys: TwoLevelSystem,
    drive: DriveField,
    cfg: PropagationConfig,
) -> Comparison:
    """Lab-frame run against the second-harmonic effective model, from |1>.

    Frequencies are the dominant ``rho22`` lines halved, so they compare
    directly with ``Omega_L``.
    """
    xi = weak_drive_ratio(sys, drive)
    notes = []
    if xi >= 0.1:
        msg = f"weak-drive ratio xi = {xi:.3f} is not below 1/10"
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
        notes.append(msg)
    params = derive_drive_params(sys, drive)
    lab_cfg = PropagationConfig(
        t_end=cfg.t_end,
        output_samples=cfg.output_samples,
        rel_tol=cfg.rel_tol,
        abs_tol=cfg.abs_tol,
        frame=Frame.LAB,
        method=cfg.method,
    )
    eff_cfg = PropagationConfig(
        t_end=cfg.t_end, output_samples=cfg.output_samples, frame=Frame.SECOND_HARMONIC
    )
    exact = propagate_lab(sys, drive, PureState2.ground(), lab_cfg)
    eff = propagate_effective(params, drive.phase_phi, PureState2.ground(), eff_cfg)
    f_exact = 0.5 * dominant_frequency(exact.times, exact.rho22)
    f_eff = 0.5 * dominant_frequency(eff.times, eff.rho22)
    mismatch = abs(f_exact - f_eff) / f_eff if f_eff and not math.isnan(f_eff) else math.nan
    return Comparison(
        max_deviation=float(np.max(np.abs(exact.rho22 - eff.rho22))),
        frequency_exact=f_exact,
        frequency_effective=f_eff,
        frequency_mismatch=mismatch,
        xi=xi,
        exact=exact,
        effective=eff,
        warnings=tuple(notes),
    )
