"""Scenario configuration: INI files, embedded presets and validation.

Config files use ``key = value`` lines grouped in sections. Units are the
ones a bench physicist would type: Grad/s for frequencies, V/cm for
fields, r_B for lengths, ns for times. Example::

    [system]
    omega_e = 220
    z11 = 1.5
    z22 = 3.8
    z12 = 0.5

    [drive]
    E = 15
    omega_l = auto

Every section is optional and falls back to the defaults in ``SCHEMA``.
Unknown sections and keys are rejected.
"""

from __future__ import annotations

import configparser
import copy
import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from .constants import GRAD_S, NS, R_B, V_PER_CM
from .dynamics import Frame, Method, PropagationConfig
from .errors import ConfigError, DomainError
from .lindblad import DissipationRates
from .model import (
    DriveField,
    EffectiveParams,
    TwoLevelSystem,
    derive_drive_params,
    resonant_drive,
)

AUTO_VALUES = ("auto", "auto-exact")


def _choice(*options):
    def parse(text):
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}")
        return text

    return parse


def _omega_l(text):
    return text if text in AUTO_VALUES else float(text)


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise ValueError("must be a positive integer")
    return value


def _optional_float(text):
    return None if text in ("", "none") else float(text)


# section -> key -> (parser, default)
SCHEMA: dict[str, dict[str, tuple]] = {
    "system": {
        "omega_e": (float, 220.0),
        "z11": (float, 1.5),
        "z22": (float, 3.8),
        "z12": (float, 0.5),
    },
    "drive": {
        "E": (float, 15.0),
        "omega_l": (_omega_l, "auto"),
        "phase": (float, 0.0),
    },
    "rates": {
        "Gamma": (_optional_float, None),
        "gamma": (_optional_float, None),
        "Gamma_per_Omega_L": (_optional_float, None),
        "gamma_per_Omega_L": (_optional_float, None),
    },
    "propagation": {
        "t_end": (float, 20.0),
        "samples": (_positive_int, 4001),
        "rel_tol": (float, 1e-12),
        "abs_tol": (float, 1e-14),
        "frame": (_choice(*(f.value for f in Frame)), "lab"),
        "method": (_choice(*(m.value for m in Method)), "floquet"),
    },
    "spectrum": {
        "t_end": (float, 400.0),
        "settle": (float, 240.0),
        "samples_per_period": (_positive_int, 16),
        "pad": (_positive_int, 8),
    },
    "lineshape": {
        "omega_L_over_K": (float, 0.2),
        "Gamma_over_gamma": (float, 1.0),
        "delta_prime_over_K": (float, 0.0),
        "min": (float, -5.0),
        "max": (float, 5.0),
        "count": (_positive_int, 201),
    },
    "hydrogenic": {
        "n_max": (_positive_int, 3),
        "step": (float, 0.01),
        "holding_field": (float, 0.0),
        "stark_step": (float, 0.1),
    },
    "sweep": {
        "parameter": (str, ""),
        "min": (float, 0.0),
        "max": (float, 1.0),
        "count": (_positive_int, 11),
    },
}

PRESETS: dict[str, str] = {
    "fig1a": """
[system]
omega_e = 220
z11 = 1.5
z22 = 3.8
z12 = 0.5

[drive]
E = 15
omega_l = auto

[propagation]
t_end = 20
samples = 4001
frame = lab
""",
    "fig1b": """
[system]
omega_e = 220
z11 = 1.5
z22 = 3.8
z12 = 0.5

[drive]
E = 15
omega_l = auto

[rates]
Gamma_per_Omega_L = 0.1
gamma_per_Omega_L = 0.1

[propagation]
t_end = 80
samples = 8001
frame = lab

[spectrum]
t_end = 400
settle = 240
""",
    "fig2": """
[rates]
Gamma_per_Omega_L = 0.1
gamma_per_Omega_L = 0.1

[lineshape]
omega_L_over_K = 0.2
Gamma_over_gamma = 1
min = -5
max = 5
count = 201
""",
    "natural-atom": """
[system]
omega_e = 220
z11 = 1.5
z22 = 1.5
z12 = 0.5

[drive]
E = 15
omega_l = auto

; Omega_L vanishes here, so the rates are fixed at the fig1b values
[rates]
Gamma = 0.0786649
gamma = 0.0786649

[propagation]
t_end = 20
samples = 4001
frame = lab

[spectrum]
t_end = 400
settle = 240
""",
}


@dataclass
class ScenarioConfig:
    """Parsed configuration.

    ``values`` maps section -> key -> typed value with defaults filled in;
    ``present`` records which sections the source actually contained.
    """

    values: dict[str, dict] = field(default_factory=dict)
    present: set[str] = field(default_factory=set)
    source: str = "<defaults>"

    # ---- construction -------------------------------------------------

    @classmethod
    def from_text(cls, text: str, source: str = "<string>") -> "ScenarioConfig":
        parser = configparser.ConfigParser(
            interpolation=None, inline_comment_prefixes=(";", "#"), strict=True
        )
        parser.optionxform = str  # keys are case-sensitive (Gamma vs gamma)
        try:
            parser.read_string(text, source=source)
        except configparser.Error as exc:
            raise ConfigError(f"{source}: {exc}") from exc
        raw = {sec: dict(parser.items(sec)) for sec in parser.sections()}
        return cls.from_raw(raw, source=source, text=text)

    @classmethod
    def from_raw(cls, raw: dict, source: str = "<dict>", text: str | None = None):
        values = {sec: {k: d for k, (_, d) in keys.items()} for sec, keys in SCHEMA.items()}
        for sec, items in raw.items():
            if sec not in SCHEMA:
                raise ConfigError(f"{source}{_where(text, sec, None)}: unknown section [{sec}]")
            for key, value in items.items():
                if key not in SCHEMA[sec]:
                    raise ConfigError(
                        f"{source}{_where(text, sec, key)}: unknown key {sec}.{key}"
                    )
                parse = SCHEMA[sec][key][0]
                try:
                    values[sec][key] = parse(value) if isinstance(value, str) else value
                except (TypeError, ValueError) as exc:
                    raise ConfigError(
                        f"{source}{_where(text, sec, key)}: bad value for {sec}.{key}: {exc}"
                    ) from exc
        cfg = cls(values=values, present=set(raw), source=source)
        cfg.validate()
        return cfg

    @classmethod
    def preset(cls, name: str) -> "ScenarioConfig":
        if name not in PRESETS:
            raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
        return cls.from_text(PRESETS[name], source=f"preset:{name}")

    @classmethod
    def load(cls, path) -> "ScenarioConfig":
        """Read an INI file, or the config snapshot inside a run manifest."""
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if path.suffix == ".json":
            try:
                snap = json.loads(text)["config"]
            except (ValueError, KeyError, TypeError) as exc:
                raise ConfigError(f"{path}: not a run manifest") from exc
            return cls.from_snapshot(snap, source=str(path))
        return cls.from_text(text, source=str(path))

    def snapshot(self) -> dict:
        """JSON-ready dict from which :meth:`from_snapshot` rebuilds this config."""
        return {
            "present": sorted(self.present),
            "values": copy.deepcopy(self.values),
        }

    @classmethod
    def from_snapshot(cls, snap: dict, source: str = "<snapshot>") -> "ScenarioConfig":
        values = snap["values"]
        raw = {sec: values[sec] for sec in snap["present"]}
        cfg = cls.from_raw(raw, source=source)
        # defaults of absent sections must match the snapshot too
        for sec, keys in values.items():
            if sec in SCHEMA:
                cfg.values[sec].update({k: v for k, v in keys.items() if k in SCHEMA[sec]})
        cfg.validate()
        return cfg

    def with_value(self, dotted: str, value) -> "ScenarioConfig":
        sec, key = _split(dotted)
        new = ScenarioConfig(copy.deepcopy(self.values), set(self.present) | {sec}, self.source)
        parse = SCHEMA[sec][key][0]
        try:
            new.values[sec][key] = parse(value) if isinstance(value, str) else value
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {dotted}: {exc}") from exc
        new.validate()
        return new

    # ---- validation ---------------------------------------------------

    def validate(self) -> None:
        r = self.values["rates"]
        for name in ("Gamma", "gamma"):
            if r[name] is not None and r[f"{name}_per_Omega_L"] is not None:
                raise ConfigError(
                    f"rates.{name} and rates.{name}_per_Omega_L are mutually exclusive"
                )
            for key in (name, f"{name}_per_Omega_L"):
                if r[key] is not None and r[key] < 0:
                    raise ConfigError(f"rates.{key} must be >= 0")
        if self.values["drive"]["E"] < 0:
            raise ConfigError("drive.E must be >= 0")
        omega_l = self.values["drive"]["omega_l"]
        if not isinstance(omega_l, str) and omega_l <= 0:
            raise ConfigError("drive.omega_l must be positive or 'auto'")
        sw = self.values["sweep"]
        if "sweep" in self.present:
            sec, key = _split(sw["parameter"])
            if sec == "sweep" or SCHEMA[sec][key][0] not in (float, _optional_float, _omega_l):
                raise ConfigError(f"sweep.parameter {sw['parameter']} is not a scalar float")
            if sw["count"] < 2:
                raise ConfigError("sweep.count must be >= 2")
        if self.values["lineshape"]["count"] < 2:
            raise ConfigError("lineshape.count must be >= 2")
        lr = self.values["lineshape"]
        if lr["omega_L_over_K"] < 0 or lr["Gamma_over_gamma"] <= 0:
            raise ConfigError("lineshape needs omega_L_over_K >= 0 and Gamma_over_gamma > 0")

    # ---- builders -----------------------------------------------------

    def system(self) -> TwoLevelSystem:
        s = self.values["system"]
        try:
            return TwoLevelSystem(
                omega_e=s["omega_e"] * GRAD_S,
                z11=s["z11"] * R_B,
                z22=s["z22"] * R_B,
                z12=s["z12"] * R_B,
            )
        except DomainError as exc:
            raise ConfigError(f"[system]: {exc}") from exc

    def drive(self) -> DriveField:
        d = self.values["drive"]
        field_ = d["E"] * V_PER_CM
        try:
            if isinstance(d["omega_l"], str):
                return resonant_drive(
                    self.system(), field_, d["phase"], exact=d["omega_l"] == "auto-exact"
                )
            return DriveField(field_, d["omega_l"] * GRAD_S, d["phase"])
        except DomainError as exc:
            raise ConfigError(f"[drive]: {exc}") from exc

    def params(self) -> EffectiveParams:
        return derive_drive_params(self.system(), self.drive())

    def has_rates(self) -> bool:
        return any(v is not None for v in self.values["rates"].values())

    def rates(self, params: EffectiveParams | None = None) -> DissipationRates:
        r = self.values["rates"]
        out = {}
        for name in ("Gamma", "gamma"):
            if r[f"{name}_per_Omega_L"] is not None:
                params = params or self.params()
                out[name] = r[f"{name}_per_Omega_L"] * abs(params.Omega_L)
            elif r[name] is not None:
                out[name] = r[name] * GRAD_S
            else:
                out[name] = 0.0
        return DissipationRates(**out)

    def propagation(self) -> PropagationConfig:
        p = self.values["propagation"]
        try:
            return PropagationConfig(
                t_end=p["t_end"] * NS,
                output_samples=p["samples"],
                rel_tol=p["rel_tol"],
                abs_tol=p["abs_tol"],
                frame=p["frame"],
                method=p["method"],
            )
        except DomainError as exc:
            raise ConfigError(f"[propagation]: {exc}") from exc

    def spectrum_propagation(self, drive: DriveField) -> tuple[PropagationConfig, float]:
        """Commensurate lab-frame grid for spectra, plus the settle time (s)."""
        s = self.values["spectrum"]
        p = self.values["propagation"]
        period = 2 * math.pi / drive.omega_l
        cycles = int(s["t_end"] * NS / period)
        if cycles < 1 or s["settle"] >= s["t_end"]:
            raise ConfigError("[spectrum]: need settle < t_end and t_end above one drive period")
        cfg = PropagationConfig(
            t_end=cycles * period,
            output_samples=cycles * s["samples_per_period"] + 1,
            rel_tol=p["rel_tol"],
            abs_tol=p["abs_tol"],
            frame=Frame.LAB,
            method=p["method"],
        )
        return cfg, s["settle"] * NS

    def lineshape_model(self) -> tuple[EffectiveParams, DissipationRates]:
        """Dimensionless model in units where ``K = 1``."""
        ls = self.values["lineshape"]
        ratio = ls["Gamma_over_gamma"]
        rates = DissipationRates(Gamma=2 * ratio / (1 + ratio), gamma=2 / (1 + ratio))
        params = EffectiveParams(
            Omega_R=0.0,
            Omega_tilde=0.0,
            delta=0.0,
            nu=0.0,
            Omega_L=ls["omega_L_over_K"],
            Delta_prime=ls["delta_prime_over_K"],
        )
        return params, rates


def _split(dotted: str) -> tuple[str, str]:
    sec, _, key = dotted.partition(".")
    if sec not in SCHEMA or key not in SCHEMA[sec]:
        raise ConfigError(f"unknown parameter {dotted!r} (use section.key)")
    return sec, key


def _where(text: str | None, section: str, key: str | None) -> str:
    """``:line N`` locating a section header or a key inside it."""
    if text is None:
        return ""
    in_section = False
    for n, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        header = re.fullmatch(r"\[(.+)\]", stripped)
        if header:
            in_section = header.group(1).strip() == section
            if in_section and key is None:
                return f":line {n}"
            continue
        if in_section and key is not None and re.match(rf"{re.escape(key)}\s*[=:]", stripped):
            return f":line {n}"
    return ""
