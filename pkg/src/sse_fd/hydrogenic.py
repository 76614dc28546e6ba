"""One-dimensional hydrogen-like surface states above a hard wall.

The electron sees ``V(z) = -Lambda e^2 / z`` for ``z > 0`` and an infinite
wall at ``z = 0``. In reduced units (length ``r_B``, energy ``2R``) the
Hamiltonian is ``-1/2 d^2/dx^2 - 1/x + f x`` with ``f`` the holding field
``e E_perp r_B / (2 hbar R)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.linalg import eigh_tridiagonal

from .constants import CONSTANTS, R_B, RYDBERG, V_PER_CM
from .errors import AccuracyError, DomainError, NumericalError

DEFAULT_STEP = R_B / 100.0
REFINE_TOL = 1e-4


def analytic_energy(n: int) -> float:
    """Bound-state energy ``-R/n**2`` as an angular frequency."""
    if int(n) != n or n < 1:
        raise DomainError(f"level index must be >= 1, got {n!r}")
    return -RYDBERG / n**2


def analytic_wavefunction(n: int, z):
    """Closed-form eigenfunction for ``n`` in {1, 2}, in ``m**-1/2``."""
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise DomainError("z must be >= 0")
    x = z / R_B
    norm = R_B**-1.5
    if n == 1:
        return 2.0 * norm * x * R_B * np.exp(-x)
    if n == 2:
        return norm / math.sqrt(2.0) * x * R_B * (1.0 - x / 2.0) * np.exp(-x / 2.0)
    raise DomainError(f"closed-form wavefunction only for n in {{1, 2}}, got {n!r}")


def _reduced_wavefunction(n: int, x: float) -> float:
    # dimensionless psi(x) with x = z / r_B, unit-normalised on (0, inf)
    if n == 1:
        return 2.0 * x * math.exp(-x)
    return x * (1.0 - x / 2.0) * math.exp(-x / 2.0) / math.sqrt(2.0)


def dipole_matrix_element(m: int, n: int, epsrel: float = 1e-13) -> float:
    """``<m|z|n>`` in metres by adaptive quadrature of the analytic states."""
    for k in (m, n):
        if k not in (1, 2):
            raise DomainError(f"matrix elements available for levels 1, 2 only, got {k!r}")
    a, b = sorted((m, n))
    value, err = quad(
        lambda x: _reduced_wavefunction(a, x) * x * _reduced_wavefunction(b, x),
        0.0,
        np.inf,
        epsabs=0.0,
        epsrel=epsrel,
        limit=200,
    )
    achieved = err / max(abs(value), 1e-300)
    if achieved > 1e-10:
        raise NumericalError(
            f"quadrature for <{m}|z|{n}> reached only {achieved:.2e} relative",
            achieved=achieved,
        )
    return value * R_B


@dataclass(frozen=True)
class SurfaceStateBasis:
    """Uniform finite-difference grid with the hard wall at ``z = 0``.

    ``grid`` holds the interior nodes ``z_i = i h``; the wall node itself is
    implicit (Dirichlet).
    """

    n_max: int
    grid: np.ndarray = field(repr=False)
    holding_field: float = 0.0

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        object.__setattr__(self, "grid", g)
        if self.n_max < 1:
            raise DomainError("n_max must be >= 1")
        if g.ndim != 1 or g.size < 2000:
            raise DomainError("grid needs at least 2000 points")
        h = np.diff(g)
        if np.any(h <= 0):
            raise DomainError("grid must be strictly increasing")
        step = h.mean()
        if np.max(np.abs(h - step)) > 1e-9 * step:
            raise DomainError("grid must be uniform")
        if abs(g[0] - step) > 1e-9 * step:
            raise DomainError("first node must sit one step above the wall at z=0")
        if g[0] > R_B / 100.0 * (1 + 1e-9) or g[-1] < 40.0 * self.n_max**2 * R_B * (1 - 1e-9):
            raise DomainError(
                "grid must span [r_B/100, 40 n_max^2 r_B]"
            )

    @classmethod
    def default(cls, n_max: int = 3, holding_field: float = 0.0, step: float = DEFAULT_STEP):
        length = max(200.0, 40.0 * n_max**2) * R_B
        n = int(round(length / step))
        return cls(n_max=n_max, grid=step * np.arange(1, n + 1), holding_field=holding_field)

    @property
    def step(self) -> float:
        return float(self.grid[1] - self.grid[0])

    def refined(self) -> "SurfaceStateBasis":
        """Same extent, half the step."""
        h = self.step / 2.0
        n = 2 * self.grid.size + 1
        return SurfaceStateBasis(self.n_max, h * np.arange(1, n + 1), self.holding_field)

    def with_field(self, holding_field: float) -> "SurfaceStateBasis":
        return SurfaceStateBasis(self.n_max, self.grid, holding_field)


@dataclass(frozen=True)
class EigenSolution:
    z: np.ndarray  # includes the wall node z=0
    energies: np.ndarray  # rad/s
    wavefunctions: np.ndarray  # shape (n_max, len(z)), m^-1/2

    def matrix_elements(self) -> np.ndarray:
        """``<m|z|n>`` (metres) between all computed levels, trapezoidal rule."""
        psi = self.wavefunctions
        return np.trapezoid(psi[:, None, :] * self.z * psi[None, :, :], self.z, axis=-1)


def _field_reduced(holding_field: float) -> float:
    return CONSTANTS.electron_charge * holding_field * R_B / (2.0 * CONSTANTS.hbar * RYDBERG)


def _solve_grid(basis: SurfaceStateBasis):
    x = basis.grid / R_B
    h = x[1] - x[0]
    diag = 1.0 / h**2 - 1.0 / x + _field_reduced(basis.holding_field) * x
    off = np.full(x.size - 1, -0.5 / h**2)
    vals, vecs = eigh_tridiagonal(diag, off, select="i", select_range=(0, basis.n_max - 1))
    return vals * 2.0 * RYDBERG, vecs


def grid_eigensolve(basis: SurfaceStateBasis, check: bool = True) -> EigenSolution:
    """Lowest ``n_max`` eigenpairs of the finite-difference Hamiltonian.

    With ``check`` the solve is repeated on a grid with half the step and an
    :class:`AccuracyError` is raised if any eigenvalue moves by more than
    ``1e-4`` relative.
    """
    energies, vecs = _solve_grid(basis)
    if check:
        fine, _ = _solve_grid(basis.refined())
        change = np.max(np.abs(fine - energies) / np.abs(fine))
        if change > REFINE_TOL:
            raise AccuracyError(
                f"grid too coarse: refinement moves eigenvalues by {change:.2e}",
                achieved=float(change),
            )
    h = basis.step
    psi = vecs.T / math.sqrt(h)
    # fix sign so each state starts positive off the wall
    psi *= np.sign(psi[:, :1])
    z = np.concatenate(([0.0], basis.grid))
    psi = np.concatenate((np.zeros((psi.shape[0], 1)), psi), axis=1)
    return EigenSolution(z=z, energies=energies, wavefunctions=psi)


@dataclass(frozen=True)
class StarkSlope:
    """Linear Stark tuning of the 1-2 transition, in Hz per (V/cm)."""

    slope: float
    first_order: float
    slope_half_step: float
    nonlinearity: float
    warnings: tuple[str, ...] = ()


def _transition_hz(basis: SurfaceStateBasis, field_v_m: float) -> float:
    e, _ = _solve_grid(basis.with_field(field_v_m))
    return (e[1] - e[0]) / (2.0 * math.pi)


def stark_slope(basis: SurfaceStateBasis, step_v_cm: float = 0.1) -> StarkSlope:
    """Central-difference slope of ``nu_e = (E2-E1)/h`` against holding field.

    The slope is taken around ``basis.holding_field`` with steps ``h`` and
    ``h/2``. ``nonlinearity`` is the curvature over ``+/-h`` relative to the
    linear change, ``|nu(+h) + nu(-h) - 2 nu(0)| / |nu(+h) - nu(-h)|``.
    """
    if basis.n_max < 2:
        raise DomainError("need n_max >= 2 for a transition")
    f0 = basis.holding_field
    h = step_v_cm * V_PER_CM
    nu = {k: _transition_hz(basis, f0 + k * h) for k in (-1.0, -0.5, 0.0, 0.5, 1.0)}
    s_full = (nu[1.0] - nu[-1.0]) / (2 * h) * V_PER_CM
    s_half = (nu[0.5] - nu[-0.5]) / h * V_PER_CM
    nonlin = abs(nu[1.0] + nu[-1.0] - 2 * nu[0.0]) / abs(nu[1.0] - nu[-1.0])

    zmat = grid_eigensolve(basis, check=False).matrix_elements()
    first = CONSTANTS.electron_charge * (zmat[1, 1] - zmat[0, 0]) / CONSTANTS.planck_h * V_PER_CM
    notes = []
    if nonlin > 0.01:
        msg = f"transition not linear in field over +/-{step_v_cm} V/cm ({nonlin:.2%})"
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
        notes.append(msg)
    return StarkSlope(
        slope=s_full,
        first_order=first,
        slope_half_step=s_half,
        nonlinearity=nonlin,
        warnings=tuple(notes),
    )
