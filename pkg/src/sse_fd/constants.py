"""Physical constants for an electron above liquid helium.

Everything is SI. The image-charge factor ``Lambda`` rescales the hydrogen
atom: the Rydberg energy picks up ``Lambda**2`` and the Bohr radius
``1/Lambda``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import constants as sc

from .errors import DomainError

EPSILON_HE = 1.0572


@dataclass(frozen=True)
class PhysicalConstants:
    electron_charge: float
    hbar: float
    electron_mass: float
    epsilon_He: float
    Lambda: float
    rydberg_R: float  # angular frequency, rad/s
    bohr_rB: float  # m

    @classmethod
    def from_dielectric(cls, epsilon_He: float = EPSILON_HE) -> "PhysicalConstants":
        if epsilon_He <= 1.0:
            raise DomainError("epsilon_He must exceed 1 for a bound image state")
        lam = (epsilon_He - 1.0) / (4.0 * (epsilon_He + 1.0))
        e, hbar, me = sc.e, sc.hbar, sc.m_e
        k = 1.0 / (4.0 * math.pi * sc.epsilon_0)  # Gaussian e^2 -> SI k e^2
        energy = lam**2 * (k * e**2) ** 2 * me / (2.0 * hbar**2)
        r_b = hbar**2 / (me * k * e**2 * lam)
        return cls(
            electron_charge=e,
            hbar=hbar,
            electron_mass=me,
            epsilon_He=epsilon_He,
            Lambda=lam,
            rydberg_R=energy / hbar,
            bohr_rB=r_b,
        )

    @property
    def planck_h(self) -> float:
        return 2.0 * math.pi * self.hbar


CONSTANTS = PhysicalConstants.from_dielectric()

#: effective Bohr radius (m), about 76 angstrom
R_B = CONSTANTS.bohr_rB
#: Rydberg energy as an angular frequency (rad/s)
RYDBERG = CONSTANTS.rydberg_R

GRAD_S = 1.0e9  # 1 Grad/s in rad/s
V_PER_CM = 100.0  # 1 V/cm in V/m
NS = 1.0e-9
