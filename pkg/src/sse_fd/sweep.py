"""Deterministic one-parameter sweeps of steady-state observables."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .config import ScenarioConfig
from .errors import SSEError
from .lindblad import steady_state
from .radiation import weak_saturation_intensity

LINESHAPE_HEADER = [
    "parameter",
    "value",
    "omega_L_over_K",
    "delta_prime_over_K",
    "rho22",
    "intensity_exact",
    "intensity_eq15",
    "error",
]
PHYSICAL_HEADER = [
    "parameter",
    "value",
    "omega_l",
    "Omega_R",
    "Omega_tilde",
    "delta",
    "nu",
    "Omega_L",
    "Delta_prime",
    "rho22",
    "intensity_exact",
    "error",
]


def header_for(cfg: ScenarioConfig) -> list[str]:
    return LINESHAPE_HEADER if "lineshape" in cfg.present else PHYSICAL_HEADER


def evaluate_point(cfg: ScenarioConfig, parameter: str, value: float) -> list:
    """One sweep row; model errors land in the ``error`` column."""
    lineshape = "lineshape" in cfg.present
    width = len(LINESHAPE_HEADER if lineshape else PHYSICAL_HEADER) - 3
    try:
        point = cfg.with_value(parameter, value)
        if lineshape:
            params, rates = point.lineshape_model()
            ss = steady_state(params, rates)
            approx = weak_saturation_intensity(
                params.Omega_L, rates.K, rates.Gamma, params.Delta_prime
            )
            cells = [
                params.Omega_L / rates.K,
                params.Delta_prime / rates.K,
                ss.rho22,
                abs(ss.rho21) ** 2,
                float(approx),
            ]
        else:
            drive = point.drive()
            params = point.params()
            rates = point.rates(params)
            cells = [
                drive.omega_l,
                params.Omega_R,
                params.Omega_tilde,
                params.delta,
                params.nu,
                params.Omega_L,
                params.Delta_prime,
            ]
            ss = steady_state(params, rates, drive.phase_phi)
            cells += [ss.rho22, abs(ss.rho21) ** 2]
        return [parameter, value, *cells, ""]
    except SSEError as exc:
        return [parameter, value, *([None] * width), f"{type(exc).__name__}: {exc}"]


def _task(args):
    snap, parameter, value = args
    return evaluate_point(ScenarioConfig.from_snapshot(snap), parameter, value)


def run_sweep(cfg: ScenarioConfig, workers: int = 1) -> tuple[list[str], list[list]]:
    """Evaluate every grid point; row order follows the axis for any ``workers``."""
    sw = cfg.values["sweep"]
    axis = np.linspace(sw["min"], sw["max"], sw["count"])
    parameter = sw["parameter"]
    if workers <= 1:
        rows = [evaluate_point(cfg, parameter, float(v)) for v in axis]
    else:
        snap = cfg.snapshot()
        tasks = [(snap, parameter, float(v)) for v in axis]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    return header_for(cfg), rows
