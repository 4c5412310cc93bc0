"""Grid scans behind the CLI subcommands."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, EnsbError
from ..kinematics import a_parameter, transit_width
from ..profiles import ProfileParams, gaussian_envelope, profile_res
from ..xsec import (ResonanceInputs, channel_kinematics, mott, ratio_closed_form, ratio_direct,
                    resonant_integrated_xsec)
from .config import OBSERVABLES, SWEEP_VARIABLES, ScanConfig, build_electron, build_field, derived_echo


@dataclass
class ScanResult:
    mode: str
    columns: list
    rows: list
    meta: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def all_failed(self, key_columns: int = 1) -> bool:
        """True when every computed (non-grid) cell is null."""
        cells = [c for r in self.rows for c in r[key_columns:]]
        return bool(cells) and all(c is None for c in cells)


def grid(scan: dict) -> np.ndarray:
    lo, hi, n = float(scan["min"]), float(scan["max"]), int(scan["points"])
    if scan["spacing"] == "log":
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def thread_count(requested=None) -> int:
    """Worker count: explicit flag, then ENSB_THREADS, then 1."""
    source, raw = "--threads", requested
    if raw is None:
        source, raw = "ENSB_THREADS", os.environ.get("ENSB_THREADS") or None
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError([f"{source} must be a positive integer, got {raw!r}"]) from None
    if n < 1:
        raise ConfigError([f"{source} must be a positive integer, got {raw!r}"])
    return n


def _map(fn, values, threads: int) -> list:
    if threads <= 1:
        return [fn(v) for v in values]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, values))


def _meta(cfg: ScanConfig) -> dict:
    return {"config": cfg.echo(), "derived": derived_echo(cfg)}


def _inputs(cfg: ScanConfig) -> ResonanceInputs:
    el, fl = cfg.electron, cfg.field
    return ResonanceInputs(build_electron(el), build_field(fl), math.radians(el["theta_f_deg"]),
                           math.radians(el["phi_i_deg"]), Z=int(el["Z"]), rho=float(fl["rho"]))


def run_profile_scan(cfg: ScanConfig, threads: int = 1) -> ScanResult:
    """Resonance profiles against beta with the photon-energy axis omega'/omega'_res."""
    fld = build_field(cfg.field)
    rho = float(cfg.field["rho"])
    wt = fld.wave1.omega_tau
    betas = grid(cfg.scan)

    def row(beta):
        beta = float(beta)
        return [1.0 - 2.0 * beta / wt, beta,
                profile_res(ProfileParams(beta, rho, (1, 0))),
                profile_res(ProfileParams(beta, rho, (1, 1))),
                float(gaussian_envelope(beta))]

    rows = _map(row, betas, threads)
    return ScanResult("profile", ["omega_ratio", "beta", "P10", "P11", "gaussian"], rows, _meta(cfg))


RATIO_COLUMNS = ["R10_closed", "R10_direct", "R01", "R_res"]


def _ratio_row(cfg: ScanConfig) -> list:
    inputs = _inputs(cfg)
    direct = ratio_direct(inputs)
    closed = ratio_closed_form(inputs.state_i, inputs.theta_f, inputs.field, (1, 0), inputs.phi_f)
    return [closed, direct.r10, direct.r01, direct.total]


def run_ratio_scan(cfg: ScanConfig, threads: int = 1) -> ScanResult:
    """Enhancement ratios against the initial electron velocity; singular rows become nulls."""
    values = grid(cfg.scan)
    failures = []

    def row(v):
        v = float(v)
        try:
            return [v] + _ratio_row(cfg.with_value("electron", "velocity", v))
        except EnsbError as exc:
            failures.append(f"v_i={v:g}: {exc}")
            return [v] + [None] * len(RATIO_COLUMNS)

    rows = _map(row, values, threads)
    return ScanResult("ratio", ["v_i"] + RATIO_COLUMNS, rows, _meta(cfg), sorted(failures))


def observables(cfg: ScanConfig, names, failures=None) -> list:
    """Evaluate the named observables at a single configuration.

    An observable that raises becomes None; its message is appended to
    ``failures`` when a list is given.
    """
    inputs = _inputs(cfg)
    out = {}
    cache = {}

    def kin(ch):
        if ch not in cache:
            cache[ch] = channel_kinematics(inputs, ch)
        return cache[ch]

    def direct():
        if "direct" not in cache:
            cache["direct"] = ratio_direct(inputs)
        return cache["direct"]

    compute = {
        "a_i": lambda: a_parameter(inputs.state_i),
        "theta_photon_deg": lambda: math.degrees(inputs.photon.polar_angle),
        "omega_res_10": lambda: kin((1, 0)).omega_res,
        "omega_res_01": lambda: kin((0, 1)).omega_res,
        "Gamma_10": lambda: transit_width(kin((1, 0)).omega_res, kin((1, 0)).omega, inputs.field.tau),
        "P10_peak": lambda: profile_res(ProfileParams(0.0, inputs.rho, (1, 0))),
        "sigma_mott": lambda: mott(inputs.state_i, inputs.final_state(), inputs.Z),
        "sigma_res": lambda: resonant_integrated_xsec(inputs).value,
        "R10_closed": lambda: ratio_closed_form(inputs.state_i, inputs.theta_f, inputs.field, (1, 0),
                                                inputs.phi_f),
        "R10_direct": lambda: direct().r10,
        "R01": lambda: direct().r01,
        "R_res": lambda: direct().total,
    }
    for name in names:
        try:
            out[name] = compute[name]()
        except EnsbError as exc:
            out[name] = None
            if failures is not None:
                failures.append(f"{name}: {exc}")
    return [out[n] for n in names]


def run_sweep(cfg: ScanConfig, threads: int = 1) -> ScanResult:
    """Any observable set over a one-parameter grid."""
    var = cfg.scan["variable"]
    section, key = SWEEP_VARIABLES[var]
    names = list(cfg.observables or OBSERVABLES)
    values = grid(cfg.scan)
    failures = []

    def row(x):
        x = float(x)
        local = []
        try:
            vals = observables(cfg.with_value(section, key, x), names, local)
        except EnsbError as exc:
            local.append(str(exc))
            vals = [None] * len(names)
        failures.extend(f"{var}={x:g}: {m}" for m in local)
        return [x] + vals

    rows = _map(row, values, threads)
    return ScanResult("sweep", [var] + names, rows, _meta(cfg), sorted(failures))


def run_point(cfg: ScanConfig, threads: int = 1) -> ScanResult:
    names = list(cfg.observables or OBSERVABLES)
    failures = []
    row = observables(cfg, names, failures)
    return ScanResult("point", names, [row], _meta(cfg), failures)


RUNNERS = {
    "profile": run_profile_scan,
    "ratio": run_ratio_scan,
    "sweep": run_sweep,
    "point": run_point,
}
