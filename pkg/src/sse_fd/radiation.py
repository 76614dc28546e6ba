"""Second-harmonic polarization, radiated-intensity lineshape and spectra."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import CONSTANTS
from .dynamics import Frame, PropagationConfig, PureState2, Trajectory, propagate_lab
from .errors import DomainError, ResolutionError
from .lindblad import DensityMatrix2, DissipationRates, evolve_master, intensity
from .model import DriveField, EffectiveParams, TwoLevelSystem, derive_drive_params
from .spectral import power_spectrum, refine_peak


@dataclass(frozen=True)
class PolarizationWave:
    """Second-harmonic polarization ``amplitude_A cos(carrier t - phase_theta)``.

    ``amplitude_A = e |z12| |rho21|``. Since ``<e z>`` contains both
    ``rho21 z12`` and its conjugate, the oscillating part of the lab-frame
    dipole is ``2 amplitude_A cos(carrier t - phase_theta)``.
    """

    amplitude_A: float  # C m
    phase_theta: float
    carrier: float  # rad/s, always 2 omega_l
    static_dipole: float = 0.0  # C m, e (rho11 z11 + rho22 z22)


def polarization_wave(
    sys: TwoLevelSystem, steady: DensityMatrix2, drive: DriveField
) -> PolarizationWave:
    """Oscillating part of ``<e z>`` at twice the drive frequency.

    The steady coherence already carries the drive phase as ``e^{-2i phi}``,
    so ``phase_theta = arg(rho21)`` is the phase of the lab-frame dipole
    relative to ``cos(2 omega_l t)``. A negative ``z12`` is folded into the
    phase so the amplitude stays non-negative.
    """
    e = CONSTANTS.electron_charge
    r21 = complex(steady.rho21)
    amp = e * abs(sys.z12) * abs(r21)
    if r21 == 0:
        theta = 0.0
    else:
        theta = math.atan2(r21.imag, r21.real) + (math.pi if sys.z12 < 0 else 0.0)
        theta = math.remainder(theta, 2 * math.pi)
    static = e * (steady.rho11 * sys.z11 + steady.rho22 * sys.z22)
    return PolarizationWave(amp, theta, 2.0 * drive.omega_l, static)


def weak_saturation_intensity(omega_L, K, Gamma, delta_prime):
    """Lorentzian approximation to ``|rho21|**2`` valid for ``Omega_L**2 << K Gamma``."""
    x = np.asarray(delta_prime, dtype=float) / K
    return (omega_L / K) ** 2 / (1.0 + x**2 + 8.0 * omega_L**2 / (K * Gamma))


@dataclass(frozen=True)
class IntensityCurve:
    detuning_axis: np.ndarray  # Delta'/K
    intensity: np.ndarray  # exact steady |rho21|^2
    intensity_approx: np.ndarray  # weak-saturation Lorentzian


def intensity_lorentzian(
    params: EffectiveParams,
    rates: DissipationRates,
    axis_range: tuple[float, float] = (-5.0, 5.0),
    samples: int = 201,
) -> IntensityCurve:
    """Steady-state ``|rho21|**2`` against ``Delta'/K``.

    ``params.Delta_prime`` is ignored; the detuning is swept along the axis.
    """
    if not rates.Gamma > 0:
        raise DomainError("the lineshape needs Gamma > 0")
    if samples < 2:
        raise DomainError("samples must be >= 2")
    axis = np.linspace(axis_range[0], axis_range[1], samples)
    K = rates.K
    exact = intensity(params.Omega_L, K, rates.Gamma, axis * K)
    approx = weak_saturation_intensity(params.Omega_L, K, rates.Gamma, axis * K)
    return IntensityCurve(axis, exact, approx)


def dipole_expectation(sys: TwoLevelSystem, traj: Trajectory) -> np.ndarray:
    """``<z>(t)`` in metres from a lab-frame trajectory."""
    if traj.rho21 is not None:
        r11, r22, r21 = traj.rho11, traj.rho22, traj.rho21
    elif traj.states is not None:
        c1, c2 = traj.states[:, 0], traj.states[:, 1]
        r11, r22, r21 = np.abs(c1) ** 2, np.abs(c2) ** 2, c2 * np.conj(c1)
    else:
        raise DomainError("trajectory carries neither states nor coherences")
    return sys.z11 * r11 + sys.z22 * r22 + 2.0 * sys.z12 * r21.real


@dataclass(frozen=True)
class SpectrumReport:
    omega: np.ndarray = field(repr=False)
    power: np.ndarray = field(repr=False)  # unnormalised, m^2
    bin_width: float
    dominant_omega: float
    omega_l: float
    peaks: tuple[tuple[float, float], ...]  # (omega, power_rel), strongest first

    @property
    def power_rel(self) -> np.ndarray:
        return self.power / self.power[self._band()].max()

    def _band(self):
        return self.omega >= 0.5 * self.omega_l

    def power_at(self, omega: float) -> float:
        """Largest power within one natural bin of ``omega``."""
        sel = np.abs(self.omega - omega) <= self.bin_width
        return float(self.power[sel].max())


def _local_maxima(power, band, count):
    idx = np.flatnonzero(band[1:-1] & (power[1:-1] > power[:-2]) & (power[1:-1] >= power[2:])) + 1
    return idx[np.argsort(power[idx])[::-1][:count]]


def spectrum_from_dynamics(
    sys: TwoLevelSystem,
    drive: DriveField,
    cfg: PropagationConfig,
    rates: DissipationRates | None = None,
    settle: float = 0.0,
    pad: int = 8,
) -> SpectrumReport:
    """Spectrum of the lab-frame dipole ``<z>(t)`` after a settling time.

    With ``rates`` the lab-frame master equation is integrated, otherwise
    the Schrodinger equation. Samples with ``t < settle`` are dropped; the
    remainder is Hann-windowed and zero-padded by ``pad``. Lines below
    ``omega_l / 2`` belong to the slow population dynamics and are excluded
    from the coherent band used for peak picking.

    Raises :class:`ResolutionError` when the analysis window is shorter than
    20 like-Rabi periods ``pi/Omega_L`` (or 20 drive periods without
    coupling), or the sampling does not reach 8 samples per drive period.
    """
    if cfg.frame is not Frame.LAB:
        raise DomainError("spectrum needs a lab-frame configuration")
    if rates is None:
        traj = propagate_lab(sys, drive, PureState2.ground(), cfg)
    else:
        traj = evolve_master(sys, drive, rates, DensityMatrix2.ground(), cfg)
    keep = traj.times >= settle
    t = traj.times[keep]
    if t.size < 16:
        raise ResolutionError("too few samples after the settling time")
    dt = t[1] - t[0]
    period = 2 * math.pi / drive.omega_l
    if dt > period / 8:
        raise ResolutionError(f"sampling too coarse: {period / dt:.1f} samples per drive period")
    om_l = abs(derive_drive_params(sys, drive).Omega_L)
    needed = 20 * math.pi / om_l if om_l > 0 else 20 * period
    window = t[-1] - t[0]
    if window < needed * (1 - 1e-9):
        raise ResolutionError(f"window {window:.3g} s shorter than required {needed:.3g} s")

    z = dipole_expectation(sys, traj)[keep]
    omega, power, bin_width = power_spectrum(t, z, pad=pad)
    band = omega >= 0.5 * drive.omega_l
    peaks_idx = _local_maxima(power, band, 8)
    top = power[peaks_idx[0]]
    peaks = tuple((refine_peak(omega, power, k), float(power[k] / top)) for k in peaks_idx)
    return SpectrumReport(
        omega=omega,
        power=power,
        bin_width=bin_width,
        dominant_omega=peaks[0][0],
        omega_l=drive.omega_l,
        peaks=peaks,
    )
