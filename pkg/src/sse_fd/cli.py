"""Command-line front end.

Every command takes ``--preset NAME`` or ``--config PATH`` (an INI file or a
previous ``manifest.json``), optional ``--set section.key=value`` overrides
and ``--out DIR``. Exit codes: 0 success, 2 configuration error, 3 numerical
error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from pathlib import Path

from . import output
from .config import PRESETS, ScenarioConfig
from .constants import GRAD_S, NS, R_B, RYDBERG, V_PER_CM
from .dynamics import (
    Frame,
    PureState2,
    compare_exact_vs_effective,
    propagate_effective,
)
from .errors import ConfigError, DomainError, SSEError
from .hydrogenic import (
    SurfaceStateBasis,
    analytic_energy,
    dipole_matrix_element,
    grid_eigensolve,
    stark_slope,
)
from .lindblad import DensityMatrix2, evolve_master, steady_state
from .model import rabi_frequency, resonant_delta, resonant_delta_exact, weak_drive_ratio
from .radiation import intensity_lorentzian, polarization_wave, spectrum_from_dynamics
from .sweep import run_sweep

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3


def _grad(x):
    return x / GRAD_S


def _load(args) -> ScenarioConfig:
    if args.config and args.preset:
        raise ConfigError("use either --config or --preset, not both")
    if args.config:
        cfg = ScenarioConfig.load(args.config)
    else:
        cfg = ScenarioConfig.preset(args.preset or "fig1a")
    for item in args.set or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects section.key=value, got {item!r}")
        cfg = cfg.with_value(key.strip(), value.strip())
    if getattr(args, "omega_L_over_K", None) is not None:
        cfg = cfg.with_value("lineshape.omega_L_over_K", args.omega_L_over_K)
    return cfg


def _out_dir(args) -> Path:
    return Path(args.out) if args.out else Path("sse_fd_out") / args.command


def _params_report(cfg: ScenarioConfig) -> tuple[dict, list[str]]:
    sys_, drive = cfg.system(), cfg.drive()
    p = cfg.params()
    om_r = rabi_frequency(sys_, drive.amplitude_E)
    delta_cf, omega_l_cf = resonant_delta(sys_, om_r)
    xi = weak_drive_ratio(sys_, drive)
    report = {
        "omega_l_Grad_s": _grad(drive.omega_l),
        "Omega_R_Grad_s": _grad(p.Omega_R),
        "Omega_tilde_Grad_s": _grad(p.Omega_tilde),
        "delta_Grad_s": _grad(p.delta),
        "delta_closed_form_Grad_s": _grad(delta_cf),
        "delta_exact_Grad_s": _grad(resonant_delta_exact(sys_, om_r)),
        "nu_Grad_s": _grad(p.nu),
        "Omega_L_Grad_s": _grad(p.Omega_L),
        "Delta_prime_Grad_s": _grad(p.Delta_prime),
        "xi": xi,
    }
    notes = []
    if xi >= 0.1:
        notes.append(f"warning: weak-drive ratio xi = {xi:.3f} is not below 1/10")
    return report, notes


def cmd_params(cfg, args, out: Path):
    report, notes = _params_report(cfg)
    for k, v in report.items():
        print(f"{k} = {v:.6g}")
    for n in notes:
        print(n, file=sys.stderr)
    if args.out:
        return [output.write_report(out / "params.txt", report)]
    return []


def cmd_rabi(cfg, args, out: Path):
    sys_, drive = cfg.system(), cfg.drive()
    prop = cfg.propagation()
    params = cfg.params()
    files = []
    if prop.frame is Frame.LAB:
        cmp = compare_exact_vs_effective(sys_, drive, prop)
        traj = cmp.exact
        y = traj.states
        files.append(
            output.write_csv(
                out / "trajectory.csv",
                ["t_ns", "rho22", "re_c1", "im_c1", "re_c2", "im_c2"],
                [traj.times / NS, traj.rho22, y[:, 0].real, y[:, 0].imag, y[:, 1].real, y[:, 1].imag],
            )
        )
        eff = cmp.effective
        files.append(output.write_csv(out / "effective.csv", ["t_ns", "rho22"], [eff.times / NS, eff.rho22]))
        summary = {
            "max_rho22": float(traj.rho22.max()),
            "max_deviation": cmp.max_deviation,
            "frequency_exact_Grad_s": _grad(cmp.frequency_exact),
            "frequency_effective_Grad_s": _grad(cmp.frequency_effective),
            "Omega_L_Grad_s": _grad(params.Omega_L),
            "frequency_mismatch": cmp.frequency_mismatch,
            "xi": cmp.xi,
        }
        files.append(output.write_report(out / "comparison.txt", summary))
        for w in cmp.warnings:
            print(f"warning: {w}", file=sys.stderr)
    else:
        traj = propagate_effective(params, drive.phase_phi, PureState2.ground(), prop)
        y = traj.states
        files.append(
            output.write_csv(
                out / "trajectory.csv",
                ["t_ns", "rho22", "re_c1", "im_c1", "re_c2", "im_c2"],
                [traj.times / NS, traj.rho22, y[:, 0].real, y[:, 0].imag, y[:, 1].real, y[:, 1].imag],
            )
        )
        summary = {"max_rho22": float(traj.rho22.max())}
    for k, v in summary.items():
        print(f"{k} = {v:.6g}")
    return files


def cmd_lindblad(cfg, args, out: Path):
    sys_, drive = cfg.system(), cfg.drive()
    params = cfg.params()
    rates = cfg.rates(params)
    prop = cfg.propagation()
    if prop.frame is Frame.LAB:
        traj = evolve_master(sys_, drive, rates, DensityMatrix2.ground(), prop)
    elif prop.frame is Frame.SECOND_HARMONIC:
        traj = evolve_master(None, params, rates, DensityMatrix2.ground(), prop, drive.phase_phi)
    else:
        raise ConfigError("lindblad supports propagation.frame = lab or second_harmonic")
    files = [
        output.write_csv(
            out / "trajectory.csv",
            ["t_ns", "rho11", "rho22", "re_rho21", "im_rho21"],
            [traj.times / NS, traj.rho11, traj.rho22, traj.rho21.real, traj.rho21.imag],
        )
    ]
    summary = {"final_rho22": float(traj.rho22[-1]), "max_rho22": float(traj.rho22.max())}
    if rates.Gamma > 0:
        summary["steady_rho22"] = steady_state(params, rates, drive.phase_phi).rho22
    for k, v in summary.items():
        print(f"{k} = {v:.6g}")
    return files


def cmd_steady(cfg, args, out: Path):
    ls = cfg.values["lineshape"]
    if "lineshape" in cfg.present:
        params, rates = cfg.lineshape_model()
        phase = 0.0
        report = {"units": "K = 1"}
    else:
        drive = cfg.drive()
        params = cfg.params()
        rates = cfg.rates(params)
        phase = drive.phase_phi
        report = {"units": "rad/s"}
    ss = steady_state(params, rates, phase)
    curve = intensity_lorentzian(params, rates, (ls["min"], ls["max"]), ls["count"])
    peak = steady_state(
        type(params)(**{**params.__dict__, "Delta_prime": 0.0}), rates, phase
    )
    report.update(
        {
            "Omega_L": params.Omega_L,
            "Delta_prime": params.Delta_prime,
            "Gamma": rates.Gamma,
            "gamma": rates.gamma,
            "K": rates.K,
            "rho11": ss.rho11,
            "rho22": ss.rho22,
            "re_rho21": complex(ss.rho21).real,
            "im_rho21": complex(ss.rho21).imag,
            "intensity": abs(ss.rho21) ** 2,
            "peak_intensity": abs(peak.rho21) ** 2,
        }
    )
    if "lineshape" not in cfg.present:
        wave = polarization_wave(cfg.system(), ss, cfg.drive())
        report.update(
            {
                "polarization_amplitude_Cm": wave.amplitude_A,
                "polarization_phase": wave.phase_theta,
                "carrier_rad_s": wave.carrier,
                "static_dipole_Cm": wave.static_dipole,
            }
        )
    for k, v in report.items():
        print(f"{k} = {output.fmt(v) if isinstance(v, str) else f'{v:.6g}'}")
    return [
        output.write_report(out / "steady.txt", report),
        output.write_csv(
            out / "intensity.csv",
            ["delta_prime_over_K", "intensity_exact", "intensity_eq15"],
            [curve.detuning_axis, curve.intensity, curve.intensity_approx],
        ),
    ]


def cmd_spectrum(cfg, args, out: Path):
    sys_, drive = cfg.system(), cfg.drive()
    params = cfg.params()
    rates = cfg.rates(params) if cfg.has_rates() else None
    if rates is not None and rates.Gamma == 0 and rates.gamma == 0:
        rates = None
    prop, settle = cfg.spectrum_propagation(drive)
    rep = spectrum_from_dynamics(sys_, drive, prop, rates, settle, pad=cfg.values["spectrum"]["pad"])
    keep = rep.omega <= 4 * drive.omega_l
    files = [
        output.write_csv(
            out / "spectrum.csv",
            ["omega_rad_per_s", "power_rel"],
            [rep.omega[keep], rep.power_rel[keep]],
        )
    ]
    report = {
        "omega_l_rad_s": drive.omega_l,
        "dominant_omega_rad_s": rep.dominant_omega,
        "dominant_over_omega_l": rep.dominant_omega / drive.omega_l,
        "bin_width_rad_s": rep.bin_width,
        "power_at_2omega_l": rep.power_at(2 * drive.omega_l),
        "power_at_omega_l": rep.power_at(drive.omega_l),
    }
    for i, (om, pw) in enumerate(rep.peaks[:4], start=1):
        report[f"peak{i}_over_omega_l"] = om / drive.omega_l
        report[f"peak{i}_power_rel"] = pw
    files.append(output.write_report(out / "spectrum.txt", report))
    for k, v in report.items():
        print(f"{k} = {v:.6g}")
    return files


def cmd_hydrogenic(cfg, args, out: Path):
    h = cfg.values["hydrogenic"]
    basis = SurfaceStateBasis.default(
        n_max=h["n_max"], holding_field=h["holding_field"] * V_PER_CM, step=h["step"] * R_B
    )
    sol = grid_eigensolve(basis)
    zmat = sol.matrix_elements() / R_B
    report = {
        "r_B_angstrom": R_B * 1e10,
        "R_over_2pi_THz": RYDBERG / (2 * math.pi) / 1e12,
        "z11_rB": dipole_matrix_element(1, 1) / R_B,
        "z22_rB": dipole_matrix_element(2, 2) / R_B,
        "z12_rB": dipole_matrix_element(1, 2) / R_B,
        "abs_z12_rB": abs(dipole_matrix_element(1, 2)) / R_B,
    }
    for n in range(1, basis.n_max + 1):
        report[f"grid_E{n}_over_R"] = sol.energies[n - 1] / RYDBERG
        report[f"grid_E{n}_rel_error"] = sol.energies[n - 1] / analytic_energy(n) - 1
    if basis.n_max >= 2:
        report["grid_z11_rB"] = zmat[0, 0]
        report["grid_z22_rB"] = zmat[1, 1]
        report["grid_z12_rB"] = zmat[0, 1]
        st = stark_slope(basis, h["stark_step"])
        report["stark_slope_GHz_per_V_cm"] = st.slope / 1e9
        report["stark_first_order_GHz_per_V_cm"] = st.first_order / 1e9
        report["stark_nonlinearity"] = st.nonlinearity
    for k, v in report.items():
        print(f"{k} = {v:.10g}")
    if not args.out and args.report:
        return []
    psi = sol.wavefunctions
    return [
        output.write_report(out / "matrix_elements.txt", report),
        output.write_csv(
            out / "wavefunctions.csv",
            ["z_m"] + [f"psi{n}" for n in range(1, basis.n_max + 1)],
            [sol.z, *psi],
        ),
    ]


def cmd_sweep(cfg, args, out: Path):
    if "sweep" not in cfg.present:
        raise ConfigError("sweep needs a [sweep] section (or --set sweep.parameter=...)")
    workers = args.workers
    if workers is None:
        env = os.environ.get("SSE_FD_WORKERS", "1")
        try:
            workers = int(env)
        except ValueError as exc:
            raise ConfigError(f"SSE_FD_WORKERS must be an integer, got {env!r}") from exc
    header, rows = run_sweep(cfg, workers=workers)
    failed = sum(1 for r in rows if r[-1])
    print(f"points = {len(rows)}\nfailed = {failed}")
    return [output.write_rows(out / "sweep.csv", header, rows)]


COMMANDS = {
    "params": cmd_params,
    "rabi": cmd_rabi,
    "lindblad": cmd_lindblad,
    "steady": cmd_steady,
    "spectrum": cmd_spectrum,
    "hydrogenic": cmd_hydrogenic,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI config file or a previous manifest.json")
    common.add_argument("--preset", choices=sorted(PRESETS), help="embedded parameter set")
    common.add_argument("--out", help="output directory (default sse_fd_out/<command>)")
    common.add_argument(
        "--set", action="append", metavar="SECTION.KEY=VALUE", help="override one config value"
    )
    common.add_argument(
        "--workers", type=int, help="sweep worker processes (default $SSE_FD_WORKERS or 1)"
    )
    parser = argparse.ArgumentParser(prog="sse-fd", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("params", parents=[common], help="print derived drive parameters")
    sub.add_parser("rabi", parents=[common], help="coherent like-Rabi dynamics")
    sub.add_parser("lindblad", parents=[common], help="dissipative dynamics")
    p = sub.add_parser("steady", parents=[common], help="steady state and intensity lineshape")
    p.add_argument("--omega-L-over-K", dest="omega_L_over_K", type=float)
    sub.add_parser("spectrum", parents=[common], help="dipole spectrum of lab-frame dynamics")
    p = sub.add_parser("hydrogenic", parents=[common], help="surface-state eigenproblem")
    p.add_argument("--report", action="store_true", help="print the matrix-element report only")
    sub.add_parser("sweep", parents=[common], help="one-parameter steady-state sweep")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        cfg = _load(args)
        out = _out_dir(args)
        files = COMMANDS[args.command](cfg, args, out)
        if files:
            derived = None
            if "lineshape" not in cfg.present or args.command != "steady":
                try:
                    derived = cfg.params()
                except SSEError:
                    derived = None
            output.write_manifest(
                out, args.command, cfg, derived, files, time.perf_counter() - start
            )
    except (ConfigError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SSEError as exc:
        print(f"numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
