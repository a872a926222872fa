"""Declarative experiment runner: config validation, sweep execution, output.

Configs are versioned JSON documents; unknown keys are rejected and every
validation failure is reported with its field path.  Sweep points go to CSV
(columns abscissa, signal, sigma, branch; LF line endings, '.' decimal) and
run metadata plus fit parameters go to a JSON sidecar.  Re-running with the
same config and seed produces byte-identical files.
"""

import dataclasses
import json
import math
import os
from dataclasses import dataclass

import numpy as np

from . import __version__
from .decoherence import (
    DecoherenceParams,
    echo_envelope,
    effective_bz_for_bath,
    ramsey_envelope,
    revival_modulation,
)
from .readout import PhotonModel, simulate_signal
from .sensitivity import (
    FitError,
    SCENARIO_NAMES,
    analytic_response,
    fit_sinusoid,
    phase_response_slope,
    report_as_dict,
    scenario_params,
    scenario_report,
    simulate_fringe,
)
from .spincore import RotorNV


class ConfigError(ValueError):
    """Invalid experiment configuration; .errors lists field-path messages."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("invalid config:\n" + "\n".join(self.errors))


CONFIG_VERSION = 1

_SCHEMA = {
    "version": None,
    "seed": None,
    "scenario": None,
    "field": {"bx", "by", "bz"},
    "rotor": {"f_rot", "theta_nv", "phi0"},
    "decoherence": {
        "t2_star",
        "t2",
        "stretch_n",
        "revival_width",
        "ramsey_detuning",
    },
    "photon": {"rate", "read_window", "contrast_c", "excess_noise_db", "n_reps"},
    "sweep": {
        "kind",
        "start",
        "stop",
        "num",
        "mc_noise",
        "include_ramsey",
        "n_reps",
        "n_points",
    },
}

_SWEEP_KINDS = ("tau-scan", "field-scan", "compare", "report")


def default_config(kind="tau-scan"):
    """Default configuration mirroring the shipped operating point."""
    cfg = {
        "version": CONFIG_VERSION,
        "seed": 0,
        "scenario": "ru_y",
        "field": {"bx": 0.0, "by": 0.0, "bz": 5.7e-3},
        "rotor": {"f_rot": 3333.0, "theta_nv": 0.06632251157578453, "phi0": 0.0},
        "decoherence": {
            "t2_star": 0.71e-6,
            "t2": 250e-6,
            "stretch_n": 2.0,
            "revival_width": 4e-6,
            "ramsey_detuning": 0.0,
        },
        "photon": {
            "rate": 3e6,
            "read_window": 3e-7,
            "contrast_c": 0.02,
            "excess_noise_db": 3.6,
            "n_reps": 250000,
        },
        "sweep": {
            "kind": kind,
            "start": 1e-6,
            "stop": 180e-6,
            "num": 360,
            "mc_noise": False,
            "include_ramsey": True,
        },
    }
    return cfg


def validate_config(doc):
    """Validate a raw config dict; returns a resolved copy or raises ConfigError."""
    errors = []
    if not isinstance(doc, dict):
        raise ConfigError(["config: must be a JSON object"])
    for key in doc:
        if key not in _SCHEMA:
            errors.append(f"{key}: unknown key")
    version = doc.get("version")
    if version != CONFIG_VERSION:
        errors.append(f"version: must be {CONFIG_VERSION}, got {version!r}")

    resolved = default_config()
    for section, allowed in _SCHEMA.items():
        if section not in doc or allowed is None:
            continue
        sub = doc[section]
        if not isinstance(sub, dict):
            errors.append(f"{section}: must be an object")
            continue
        for key, value in sub.items():
            if key not in allowed:
                errors.append(f"{section}.{key}: unknown key")
            else:
                resolved[section][key] = value
    if "seed" in doc:
        if not isinstance(doc["seed"], int) or doc["seed"] < 0:
            errors.append("seed: must be a nonnegative integer")
        else:
            resolved["seed"] = doc["seed"]
    if "scenario" in doc:
        if doc["scenario"] not in SCENARIO_NAMES:
            errors.append(f"scenario: must be one of {sorted(SCENARIO_NAMES)}")
        else:
            resolved["scenario"] = doc["scenario"]

    sweep = resolved["sweep"]
    if sweep["kind"] not in _SWEEP_KINDS:
        errors.append(f"sweep.kind: must be one of {sorted(_SWEEP_KINDS)}")
    if not isinstance(sweep.get("num"), int) or sweep["num"] < 2:
        errors.append("sweep.num: must be an integer >= 2")
    if not (
        isinstance(sweep.get("start"), (int, float))
        and isinstance(sweep.get("stop"), (int, float))
        and sweep["stop"] > sweep["start"]
    ):
        errors.append("sweep.stop: must be numeric and exceed sweep.start")
    for path, val, cond in [
        ("rotor.f_rot", resolved["rotor"]["f_rot"], lambda v: v >= 0),
        ("rotor.theta_nv", resolved["rotor"]["theta_nv"], lambda v: 0 <= v <= math.pi),
        ("decoherence.t2", resolved["decoherence"]["t2"], lambda v: v > 0),
        ("decoherence.t2_star", resolved["decoherence"]["t2_star"], lambda v: v > 0),
        ("photon.rate", resolved["photon"]["rate"], lambda v: v > 0),
        ("photon.contrast_c", resolved["photon"]["contrast_c"], lambda v: 0 < v < 1),
        ("photon.n_reps", resolved["photon"]["n_reps"], lambda v: v >= 1),
    ]:
        if not isinstance(val, (int, float)) or not cond(val):
            errors.append(f"{path}: out of range (got {val!r})")
    if errors:
        raise ConfigError(errors)
    return resolved


def load_config(path):
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError([f"config: invalid JSON ({exc})"]) from exc
    return validate_config(doc)


@dataclass
class SweepResult:
    points: list          # (abscissa, signal, sigma, branch) records
    metadata: dict        # resolved config echo, code version, seed
    fits: dict = None


def _metadata(cfg, extra=None):
    meta = {"config": cfg, "code_version": __version__, "seed": cfg["seed"]}
    if extra:
        meta.update(extra)
    return meta


def _echo_contrast(cfg, tau, rotating):
    p = DecoherenceParams(**cfg["decoherence"])
    c = cfg["photon"]["contrast_c"]
    f_rot = cfg["rotor"]["f_rot"] if rotating else 0.0
    b_eff = effective_bz_for_bath(cfg["field"]["bz"], f_rot)
    env = float(echo_envelope(tau, p)) * float(revival_modulation(tau, b_eff, p))
    return c * env / (2.0 - c), env


def run_tau_scan(cfg, workers=1):
    """Echo contrast vs tau, stationary and rotating, optional Ramsey trace."""
    sweep = cfg["sweep"]
    taus = np.linspace(sweep["start"], sweep["stop"], sweep["num"])
    p = DecoherenceParams(**cfg["decoherence"])
    pm = PhotonModel(**cfg["photon"])
    points = []
    traces = [("stationary", False), ("rotating", True)]
    for label, rotating in traces:
        for idx, tau in enumerate(taus):
            contrast, env = _echo_contrast(cfg, float(tau), rotating)
            if sweep["mc_noise"]:
                p_half = (1.0 + env) / 2.0
                p_threehalf = (1.0 - env) / 2.0
                s, sg = simulate_signal(
                    p_half, p_threehalf, pm, seed=[cfg["seed"], int(rotating), idx]
                )
                points.append((float(tau), s, sg, label))
            else:
                points.append((float(tau), contrast, 0.0, label))
    if sweep["include_ramsey"]:
        c = cfg["photon"]["contrast_c"]
        for tau in taus:
            env = float(ramsey_envelope(float(tau), p))
            points.append((float(tau), c * env / (2.0 - c), 0.0, "ramsey"))
    return SweepResult(points, _metadata(cfg))


def run_field_scan(cfg, workers=1):
    """Field sweep across the fringe for the configured scenario, with fit."""
    scn = scenario_params(cfg["scenario"])
    sweep = cfg["sweep"]
    n_points = sweep.get("n_points")
    mc_points, phases = simulate_fringe(
        scn,
        seed=cfg["seed"],
        n_reps=sweep.get("n_reps"),
        n_points=n_points,
        workers=workers,
    )
    env = scn.envelope()
    points = [(b, s, sg, "S") for b, s, sg in mc_points]
    for (b, _, _), phi in zip(mc_points, phases):
        points.append((b, (1.0 + env * math.cos(phi)) / 2.0, 0.0, "p_half_pi"))
        points.append((b, (1.0 - env * math.cos(phi)) / 2.0, 0.0, "p_three_half_pi"))
    fits = {}
    try:
        fit = fit_sinusoid(mc_points)
        fits["sinusoid"] = dataclasses.asdict(fit)
    except FitError as exc:
        fits["sinusoid_error"] = str(exc)
    ds_db_analytic, _, slope = analytic_response(scn)
    fits["ds_db_analytic"] = ds_db_analytic
    fits["phase_slope_rad_per_tesla"] = slope
    return SweepResult(points, _metadata(cfg, {"scenario": scn.name}), fits)


def run_compare(cfg, workers=1):
    """Ramsey-y, Ramsey-z and RU-y fringes with slope and ratio summary."""
    names = ("ramsey_y", "ramsey_z", "ru_y")
    points = []
    slopes, slopes_analytic, phase_slopes = {}, {}, {}
    for name in names:
        scn = scenario_params(name)
        mc_points, _ = simulate_fringe(
            scn, seed=cfg["seed"], n_reps=cfg["sweep"].get("n_reps"), workers=workers
        )
        points.extend((b, s, sg, name) for b, s, sg in mc_points)
        fit = fit_sinusoid(mc_points)
        slopes[name] = fit.ds_db
        ds_an, _, slope = analytic_response(scn)
        slopes_analytic[name] = ds_an
        phase_slopes[name] = abs(slope)
    fits = {
        "ds_db_fitted": slopes,
        "ds_db_analytic": slopes_analytic,
        "phase_slope_rad_per_tesla": phase_slopes,
        "geometry_ratio_ramsey_z_over_y": phase_slopes["ramsey_z"] / phase_slopes["ramsey_y"],
        "fitted_ratio_ramsey_z_over_y": slopes["ramsey_z"] / slopes["ramsey_y"],
        "fitted_ratio_ru_over_ramsey_y": slopes["ru_y"] / slopes["ramsey_y"],
        "phase_ratio_ru_over_ramsey_y": phase_slopes["ru_y"] / phase_slopes["ramsey_y"],
    }
    return SweepResult(points, _metadata(cfg), fits)


def run_table1(cfg, workers=1):
    """Sensitivity table for the four demonstrated configurations."""
    names = ("ramsey_y", "ramsey_z", "ru_y", "ru_y_best")
    return _reports(cfg, names, workers)


def run_sensitivity(cfg, workers=1):
    """Sensitivity reports for every shipped scenario, including the projection."""
    return _reports(cfg, SCENARIO_NAMES, workers)


def _reports(cfg, names, workers):
    rows = {}
    points = []
    for name in names:
        rep = scenario_report(
            name,
            seed=cfg["seed"],
            n_reps=cfg["sweep"].get("n_reps"),
            n_points=cfg["sweep"].get("n_points"),
            workers=workers,
        )
        rows[name] = report_as_dict(rep)
        points.append((rep.ds_db, rep.delta_b_min, rep.eta_opr, name))
    return SweepResult(points, _metadata(cfg), {"reports": rows})


def write_result(result: SweepResult, out_dir, name):
    """Write points to <name>.csv and metadata/fits to <name>.json (LF, UTF-8)."""
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, f"{name}.csv")
    with open(csv_path, "w", newline="") as fh:
        fh.write("abscissa,signal,sigma,branch\n")
        for a, s, sg, branch in result.points:
            fh.write(f"{a!r},{s!r},{sg!r},{branch}\n")
    sidecar = {"metadata": result.metadata, "fits": result.fits}
    json_path = os.path.join(out_dir, f"{name}.json")
    with open(json_path, "w", newline="") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return csv_path, json_path
