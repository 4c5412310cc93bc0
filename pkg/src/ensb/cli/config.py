"""Scan configuration: defaults, JSON files, dotted overrides and validation."""
from __future__ import annotations

import copy
import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

from ..errors import ConfigError, EnsbError
from ..kinematics import ElectronState
from ..waves import ETA_MAX, TwoWaveField

MODES = ("profile", "ratio", "sweep", "point")
FORMATS = ("csv", "json")
SPACINGS = ("linear", "log")

# scan variable -> (section, key)
SWEEP_VARIABLES = {
    "E_i": ("electron", "energy_MeV"),
    "v_i": ("electron", "velocity"),
    "theta_i": ("electron", "theta_i_deg"),
    "theta_f": ("electron", "theta_f_deg"),
    "omega1": ("field", "omega1_eV"),
    "omega2": ("field", "omega2_eV"),
    "eta01": ("field", "eta01"),
    "eta02": ("field", "eta02"),
    "tau": ("field", "tau_ps"),
    "rho": ("field", "rho"),
}

OBSERVABLES = ("a_i", "theta_photon_deg", "omega_res_10", "omega_res_01", "Gamma_10", "P10_peak",
               "sigma_mott", "sigma_res", "R10_closed", "R10_direct", "R01", "R_res")

DEFAULTS = {
    "electron": {
        "energy_MeV": 1.02,
        "velocity": None,
        "theta_i_deg": 163.0,
        "phi_i_deg": 0.0,
        "theta_f_deg": 10.0,
        "Z": 1,
    },
    "field": {
        "omega1_eV": 2.35,
        "omega2_eV": 1.0,
        "eta01": 0.1,
        "eta02": 0.1,
        "tau_ps": 0.1,
        "delta_deg": 0.0,
        "rho": 5.0,
    },
    "scan": {
        "variable": None,
        "min": None,
        "max": None,
        "points": None,
        "spacing": None,
    },
    "output": {
        "path": None,
        "format": "csv",
        "precision": 12,
    },
    "observables": None,
}

SCAN_DEFAULTS = {
    "profile": {"variable": "beta", "min": -4.0, "max": 4.0, "points": 401, "spacing": "linear"},
    "ratio": {"variable": "v_i", "min": 0.05, "max": 0.9, "points": 100, "spacing": "log"},
    "sweep": {"variable": None, "min": None, "max": None, "points": 50, "spacing": "linear"},
    "point": {"variable": None, "min": None, "max": None, "points": None, "spacing": None},
}


@dataclass(frozen=True)
class ScanConfig:
    mode: str
    data: dict

    @property
    def electron(self) -> dict:
        return self.data["electron"]

    @property
    def field(self) -> dict:
        return self.data["field"]

    @property
    def scan(self) -> dict:
        return self.data["scan"]

    @property
    def output(self) -> dict:
        return self.data["output"]

    @property
    def observables(self):
        return self.data["observables"]

    def with_value(self, section: str, key: str, value) -> "ScanConfig":
        data = copy.deepcopy(self.data)
        data[section][key] = value
        if (section, key) == ("electron", "velocity"):
            data["electron"]["energy_MeV"] = None
        elif (section, key) == ("electron", "energy_MeV"):
            data["electron"]["velocity"] = None
        return ScanConfig(self.mode, data)

    def echo(self) -> dict:
        """Resolved configuration, sufficient to repeat the run."""
        return {"mode": self.mode, **self.data}


def _merge(base: dict, update: dict, path: str, problems: list):
    for key, value in update.items():
        where = f"{path}.{key}" if path else key
        if key not in base:
            problems.append(f"unknown key '{where}'")
            continue
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                problems.append(f"'{where}' must be an object, got {value!r}")
                continue
            _merge(base[key], value, where, problems)
        else:
            base[key] = value


def parse_override(text: str):
    """'section.key=value' -> (path list, value).  Values parse as JSON, else string."""
    if "=" not in text:
        raise ConfigError([f"override '{text}' is not of the form key=value"])
    key, raw = text.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip().split("."), value


def _apply_override(data: dict, path: list, value, problems: list):
    node = data
    for i, part in enumerate(path):
        where = ".".join(path[: i + 1])
        if not isinstance(node, dict) or part not in node:
            problems.append(f"unknown key '{where}'")
            return
        if i == len(path) - 1:
            if isinstance(node[part], dict):
                problems.append(f"'{where}' is a section, not a value")
                return
            node[part] = value
        else:
            node = node[part]


def _number(section, key, value, problems, *, positive=False, integer=False, allow_none=False):
    where = f"{section}.{key}"
    if value is None:
        if not allow_none:
            problems.append(f"{where} is required")
        return
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        problems.append(f"{where} must be a number, got {value!r}")
        return
    if not math.isfinite(value):
        problems.append(f"{where} must be finite, got {value!r}")
    elif integer and int(value) != value:
        problems.append(f"{where} must be an integer, got {value!r}")
    elif positive and not value > 0:
        problems.append(f"{where} must be positive, got {value!r}")


def _validate(mode: str, d: dict) -> list:
    problems = []
    el, fl, sc, out = d["electron"], d["field"], d["scan"], d["output"]
    for key in ("theta_i_deg", "phi_i_deg", "theta_f_deg"):
        _number("electron", key, el[key], problems)
    _number("electron", "Z", el["Z"], problems, positive=True, integer=True)
    _number("electron", "energy_MeV", el["energy_MeV"], problems, positive=True, allow_none=True)
    _number("electron", "velocity", el["velocity"], problems, positive=True, allow_none=True)
    swept = sc["variable"] if mode in ("ratio", "sweep") else None
    has_e = el["energy_MeV"] is not None or swept == "E_i"
    has_v = el["velocity"] is not None or swept == "v_i"
    if swept not in ("E_i", "v_i"):
        if has_e == has_v:
            problems.append("give exactly one of electron.energy_MeV or electron.velocity")
    for key in ("theta_i_deg", "theta_f_deg"):
        v = el[key]
        if isinstance(v, (int, float)) and not 0 <= v <= 180:
            problems.append(f"electron.{key} must lie in [0, 180], got {v!r}")

    for key in ("omega1_eV", "omega2_eV", "tau_ps", "rho"):
        _number("field", key, fl[key], problems, positive=True)
    for key in ("eta01", "eta02"):
        _number("field", key, fl[key], problems)
        v = fl[key]
        if isinstance(v, (int, float)) and not 0 <= v < ETA_MAX:
            problems.append(f"field.{key} = {v!r} outside the moderately-strong-field range [0, {ETA_MAX})")
    _number("field", "delta_deg", fl["delta_deg"], problems)
    o1, o2 = fl["omega1_eV"], fl["omega2_eV"]
    if isinstance(o1, (int, float)) and isinstance(o2, (int, float)) and not o1 > o2:
        problems.append(f"field.omega1_eV = {o1!r} must exceed field.omega2_eV = {o2!r}")

    if mode != "point":
        if mode == "sweep" and sc["variable"] not in SWEEP_VARIABLES:
            problems.append(f"scan.variable must be one of {sorted(SWEEP_VARIABLES)}, got {sc['variable']!r}")
        if mode == "profile" and sc["variable"] != "beta":
            problems.append(f"profile scans run over beta, got scan.variable = {sc['variable']!r}")
        if mode == "ratio" and sc["variable"] != "v_i":
            problems.append(f"ratio scans run over v_i, got scan.variable = {sc['variable']!r}")
        _number("scan", "min", sc["min"], problems)
        _number("scan", "max", sc["max"], problems)
        _number("scan", "points", sc["points"], problems, integer=True)
        if isinstance(sc["points"], (int, float)) and sc["points"] < 2:
            problems.append(f"scan.points must be at least 2, got {sc['points']!r}")
        if sc["spacing"] not in SPACINGS:
            problems.append(f"scan.spacing must be one of {SPACINGS}, got {sc['spacing']!r}")
        lo, hi = sc["min"], sc["max"]
        if isinstance(lo, (int, float)) and isinstance(hi, (int, float)):
            if not hi > lo:
                problems.append(f"scan.max = {hi!r} must exceed scan.min = {lo!r}")
            if sc["spacing"] == "log" and not lo > 0:
                problems.append(f"log spacing needs scan.min > 0, got {lo!r}")
            if sc["variable"] == "v_i" and not (lo > 0 and hi < 1):
                problems.append(f"v_i scan range must lie inside (0, 1), got [{lo!r}, {hi!r}]")

    if out["format"] not in FORMATS:
        problems.append(f"output.format must be one of {FORMATS}, got {out['format']!r}")
    _number("output", "precision", out["precision"], problems, positive=True, integer=True)
    if isinstance(out["precision"], int) and not 1 <= out["precision"] <= 17:
        problems.append(f"output.precision must lie in [1, 17], got {out['precision']!r}")
    obs = d["observables"]
    if obs is not None:
        if not isinstance(obs, list) or not obs:
            problems.append("observables must be a non-empty list")
        else:
            for name in obs:
                if name not in OBSERVABLES:
                    problems.append(f"unknown observable {name!r}; available: {list(OBSERVABLES)}")
    return problems


def build_field(fl: dict) -> TwoWaveField:
    return TwoWaveField.from_lab(fl["omega1_eV"], fl["omega2_eV"], fl["eta01"], fl["eta02"], fl["tau_ps"],
                                 fl["delta_deg"])


def build_electron(el: dict) -> ElectronState:
    th, ph = math.radians(el["theta_i_deg"]), math.radians(el["phi_i_deg"])
    if el["velocity"] is not None:
        return ElectronState.from_velocity(el["velocity"], th, ph)
    return ElectronState.from_energy(el["energy_MeV"] * 1e6, th, ph)


def _physical_checks(mode: str, d: dict) -> list:
    problems = []
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            build_field(d["field"])
    except EnsbError as exc:
        problems.append(f"field: {exc}")
    el = d["electron"]
    if el["energy_MeV"] is not None and el["energy_MeV"] * 1e6 < 0.511e6:
        problems.append(f"electron.energy_MeV = {el['energy_MeV']!r} is below the rest mass 0.511 MeV")
    if el["velocity"] is not None and not 0 < el["velocity"] < 1:
        problems.append(f"electron.velocity must lie in (0, 1), got {el['velocity']!r}")
    return problems


def load_config(mode: str, path=None, overrides=()) -> ScanConfig:
    """Merge defaults, an optional JSON file and dotted overrides, then validate.

    Every problem found is reported at once through :class:`ConfigError`.
    """
    if mode not in MODES:
        raise ConfigError([f"unknown mode {mode!r}"])
    data = copy.deepcopy(DEFAULTS)
    data["scan"] = dict(SCAN_DEFAULTS[mode])
    problems = []
    if path is not None:
        p = Path(path)
        try:
            loaded = json.loads(p.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError([f"cannot read config {p}: {exc.strerror}"]) from exc
        except json.JSONDecodeError as exc:
            raise ConfigError([f"config {p} is not valid JSON: {exc}"]) from exc
        if not isinstance(loaded, dict):
            raise ConfigError([f"config {p} must hold a JSON object"])
        loaded = dict(loaded)
        declared = loaded.pop("mode", mode)
        if declared != mode:
            problems.append(f"config declares mode {declared!r} but the {mode!r} command was run")
        _merge(data, loaded, "", problems)
    for text in overrides:
        try:
            keys, value = parse_override(text)
        except ConfigError as exc:
            problems.extend(exc.problems)
            continue
        _apply_override(data, keys, value, problems)
    # an explicit velocity replaces the default energy
    if data["electron"]["velocity"] is not None and _energy_is_default(data, path, overrides):
        data["electron"]["energy_MeV"] = None
    problems.extend(_validate(mode, data))
    if not problems:
        problems.extend(_physical_checks(mode, data))
    if problems:
        raise ConfigError(problems)
    if mode in ("ratio", "sweep"):
        var = data["scan"]["variable"]
        if var == "v_i":
            data["electron"]["energy_MeV"] = None
        elif var == "E_i":
            data["electron"]["velocity"] = None
    return ScanConfig(mode, data)


def _energy_is_default(data, path, overrides) -> bool:
    for text in overrides:
        if text.split("=", 1)[0].strip() == "electron.energy_MeV":
            return False
    if path is not None:
        try:
            loaded = json.loads(Path(path).read_text(encoding="utf-8"))
            if "energy_MeV" in loaded.get("electron", {}):
                return False
        except (OSError, json.JSONDecodeError, AttributeError):
            pass
    return True


def derived_echo(cfg: ScanConfig) -> dict:
    """Quantities derived at load time, reported alongside the config."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        fld = build_field(cfg.field)
    return {
        "omega_tau_1": fld.wave1.omega_tau,
        "omega_tau_2": fld.wave2.omega_tau,
        "tau_inv_eV": fld.tau,
    }
