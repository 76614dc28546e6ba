"""Frequency doubling with symmetry-broken surface-state electrons on helium."""

__version__ = "0.1.0"

from .constants import CONSTANTS, GRAD_S, NS, R_B, RYDBERG, V_PER_CM, PhysicalConstants
from .dynamics import (
    Frame,
    Method,
    PropagationConfig,
    PureState2,
    Trajectory,
    compare_exact_vs_effective,
    propagate_effective,
    propagate_lab,
)
from .hydrogenic import (
    SurfaceStateBasis,
    analytic_energy,
    analytic_wavefunction,
    dipole_matrix_element,
    grid_eigensolve,
    stark_slope,
)
from .lindblad import (
    DensityMatrix2,
    DissipationRates,
    envelope_comparison,
    evolve_master,
    steady_state,
    steady_vs_longtime,
)
from .model import (
    DriveField,
    EffectiveParams,
    TwoLevelSystem,
    derive_drive_params,
    fig1_system,
    resonant_delta,
    resonant_delta_exact,
    resonant_drive,
)
from .radiation import intensity_lorentzian, polarization_wave, spectrum_from_dynamics
