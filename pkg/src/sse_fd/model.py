"""Two-level data model and the closed-form drive parameters.

All frequencies are angular (rad/s), lengths in metres and fields in V/m.
The symmetry-broken electron differs from a natural atom only through the
diagonal dipole elements ``z11 != z22``; their difference feeds the Stark
coupling ``Omega_tilde`` which in turn enables the two-photon like-Rabi
coupling ``Omega_L`` near ``omega_l = omega_e / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .constants import CONSTANTS, GRAD_S, R_B, V_PER_CM
from .errors import DomainError, NoResonanceError, RegimeError, SingularParameterError


@dataclass(frozen=True)
class TwoLevelSystem:
    """Lowest two surface-state levels and their dipole matrix elements."""

    omega_e: float
    z11: float
    z22: float
    z12: float

    def __post_init__(self):
        if not (self.omega_e > 0 and math.isfinite(self.omega_e)):
            raise DomainError(f"omega_e must be positive, got {self.omega_e!r}")
        if self.z12 == 0:
            raise DomainError("z12 must be nonzero")
        for name in ("z11", "z22", "z12"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")

    @property
    def dz(self) -> float:
        return self.z22 - self.z11

    @property
    def symmetric(self) -> bool:
        """True for a parity-symmetric (natural-atom) system."""
        return self.z22 == self.z11


@dataclass(frozen=True)
class DriveField:
    amplitude_E: float
    omega_l: float
    phase_phi: float = 0.0

    def __post_init__(self):
        if not self.amplitude_E >= 0:
            raise DomainError(f"amplitude_E must be >= 0, got {self.amplitude_E!r}")
        if not (self.omega_l > 0 and math.isfinite(self.omega_l)):
            raise DomainError(f"omega_l must be positive, got {self.omega_l!r}")


@dataclass(frozen=True)
class EffectiveParams:
    Omega_R: float
    Omega_tilde: float
    delta: float
    nu: float
    Omega_L: float
    Delta_prime: float
    Delta: float = 0.0  # ordinary detuning omega_e - omega_l


def fig1_system(natural_atom: bool = False) -> TwoLevelSystem:
    """Working point used for the like-Rabi demonstration.

    Only ``z22 - z11 = 2.3 r_B`` is fixed by the model; the absolute
    diagonal elements are placed at the bare ground-state value ``1.5 r_B``
    since they only shift the static dipole. ``natural_atom`` collapses the
    diagonal difference to zero.
    """
    z11 = 1.5 * R_B
    z22 = z11 if natural_atom else z11 + 2.3 * R_B
    return TwoLevelSystem(omega_e=220.0 * GRAD_S, z11=z11, z22=z22, z12=0.5 * R_B)


FIG1_FIELD = 15.0 * V_PER_CM


def rabi_frequency(sys: TwoLevelSystem, amplitude_E: float) -> float:
    return sys.z12 * CONSTANTS.electron_charge * amplitude_E / (2.0 * CONSTANTS.hbar)


def stark_coupling(sys: TwoLevelSystem, amplitude_E: float) -> float:
    return sys.dz * CONSTANTS.electron_charge * amplitude_E / (4.0 * CONSTANTS.hbar)


def level_shift(omega_e: float, Omega_R: float, delta: float) -> float:
    """Drive-induced shift ``nu`` of the transition, untruncated in ``delta``."""
    return 4.0 * Omega_R**2 * (1.0 / (omega_e - delta) + 1.0 / (3.0 * omega_e + delta))


def derive_drive_params(sys: TwoLevelSystem, drive: DriveField) -> EffectiveParams:
    """Couplings, shift and effective detuning for a given drive.

    Raises
    ------
    SingularParameterError
        If ``delta**2 == omega_e**2`` (pole of ``Omega_L`` and ``nu``).
    """
    w = sys.omega_e
    delta = 2.0 * drive.omega_l - w
    denom = w * w - delta * delta
    if abs(denom) <= 1e-12 * w * w:
        raise SingularParameterError(
            f"delta = {delta:.6g} rad/s sits on the pole |delta| = omega_e"
        )
    om_r = rabi_frequency(sys, drive.amplitude_E)
    om_t = stark_coupling(sys, drive.amplitude_E)
    nu = level_shift(w, om_r, delta)
    om_l = 4.0 * om_r * om_t * w / denom
    return EffectiveParams(
        Omega_R=om_r,
        Omega_tilde=om_t,
        delta=delta,
        nu=nu,
        Omega_L=om_l,
        Delta_prime=nu - delta,
        Delta=w - drive.omega_l,
    )


def weak_drive_ratio(sys: TwoLevelSystem, drive: DriveField) -> float:
    """``xi = max(|Omega_R|, |Omega_tilde|) / min(omega_l, omega_e)``."""
    om_r = abs(rabi_frequency(sys, drive.amplitude_E))
    om_t = abs(stark_coupling(sys, drive.amplitude_E))
    return max(om_r, om_t) / min(drive.omega_l, sys.omega_e)


def resonant_delta(sys: TwoLevelSystem, Omega_R: float) -> tuple[float, float]:
    """Closed-form ``(delta, omega_l)`` from the linearised ``Delta' = 0``.

    Raises :class:`RegimeError` when ``9 omega_e**2 <= 32 Omega_R**2``, where
    the expansion in ``delta / omega_e`` no longer applies.
    """
    w = sys.omega_e
    denom = 9.0 * w * w - 32.0 * Omega_R**2
    if denom <= 0:
        raise RegimeError("drive too strong: 9 omega_e^2 <= 32 Omega_R^2")
    shift = 24.0 * w * Omega_R**2 / denom
    omega_l = w / 2.0 + shift
    # delta = 2 omega_l - omega_e by construction; 48 w O^2/denom == 2*shift
    return 2.0 * shift, omega_l


def resonant_delta_exact(sys: TwoLevelSystem, Omega_R: float) -> float:
    """Root ``delta*`` of ``nu(delta) - delta`` on ``[0, omega_e/2]``."""
    w = sys.omega_e
    if Omega_R == 0:
        return 0.0

    def f(d):
        return level_shift(w, Omega_R, d) - d

    lo, hi = 0.0, 0.5 * w
    if not f(lo) > 0 > f(hi):
        raise NoResonanceError(
            f"no sign change of nu(delta) - delta on [0, omega_e/2] for Omega_R={Omega_R:.6g}"
        )
    root = brentq(f, lo, hi, xtol=1e-15 * w, rtol=4 * math.ulp(1.0), maxiter=200)
    if abs(f(root)) >= 1e-12 * w:
        raise NoResonanceError(f"root residual {abs(f(root)):.3g} above 1e-12 omega_e")
    return root


def resonant_drive(
    sys: TwoLevelSystem,
    amplitude_E: float,
    phase_phi: float = 0.0,
    exact: bool = False,
) -> DriveField:
    """Drive at the second-harmonic resonance ``Delta' = 0``."""
    om_r = rabi_frequency(sys, amplitude_E)
    if exact:
        omega_l = 0.5 * (sys.omega_e + resonant_delta_exact(sys, om_r))
    else:
        omega_l = resonant_delta(sys, om_r)[1]
    return DriveField(amplitude_E=amplitude_E, omega_l=omega_l, phase_phi=phase_phi)
