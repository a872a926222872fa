"""Config validation, sweep runners, output files, and the command line."""

import json

import numpy as np
import pytest

from rotomag.cli import main
from rotomag.harness import (
    ConfigError,
    default_config,
    load_config,
    run_compare,
    run_field_scan,
    run_tau_scan,
    validate_config,
    write_result,
)


# --- config validation -----------------------------------------------------------

def test_default_config_validates():
    for kind in ("tau-scan", "field-scan", "compare", "report"):
        cfg = validate_config(default_config(kind))
        assert cfg["sweep"]["kind"] == kind


def test_unknown_keys_rejected_with_paths():
    doc = default_config()
    doc["frequencyy"] = 1.0
    doc["photon"]["gain"] = 2.0
    with pytest.raises(ConfigError) as exc:
        validate_config(doc)
    msgs = exc.value.errors
    assert any(m.startswith("frequencyy:") for m in msgs)
    assert any(m.startswith("photon.gain:") for m in msgs)


def test_version_required():
    doc = default_config()
    doc["version"] = 99
    with pytest.raises(ConfigError) as exc:
        validate_config(doc)
    assert any(m.startswith("version:") for m in exc.value.errors)


def test_out_of_range_values_rejected():
    doc = default_config()
    doc["photon"]["contrast_c"] = 1.7
    doc["rotor"]["f_rot"] = -3.0
    doc["sweep"]["stop"] = doc["sweep"]["start"] - 1.0
    with pytest.raises(ConfigError) as exc:
        validate_config(doc)
    msgs = "\n".join(exc.value.errors)
    assert "photon.contrast_c" in msgs
    assert "rotor.f_rot" in msgs
    assert "sweep.stop" in msgs


def test_invalid_json_reported(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(str(path))


def test_unknown_scenario_rejected():
    doc = default_config()
    doc["scenario"] = "mystery"
    with pytest.raises(ConfigError):
        validate_config(doc)


# --- tau scan -----------------------------------------------------------------------

def _tau_cfg(**sweep):
    doc = default_config("tau-scan")
    doc["sweep"].update(sweep)
    return validate_config(doc)


def test_tau_scan_rotating_revival_peak():
    cfg = _tau_cfg(start=1e-6, stop=180e-6, num=720)
    result = run_tau_scan(cfg)
    rot = [(a, s) for a, s, _, br in result.points if br == "rotating"]
    taus = np.array([a for a, _ in rot])
    sig = np.array([s for _, s in rot])
    window = (taus > 110e-6) & (taus < 140e-6)
    peak_tau = taus[window][np.argmax(sig[window])]
    assert abs(peak_tau - 124e-6) < 2e-6


def test_tau_scan_traces_identical_when_not_rotating():
    doc = default_config("tau-scan")
    doc["rotor"]["f_rot"] = 0.0
    result = run_tau_scan(validate_config(doc))
    by_branch = {}
    for a, s, _, br in result.points:
        by_branch.setdefault(br, []).append((a, s))
    assert by_branch["stationary"] == by_branch["rotating"]


def test_tau_scan_ramsey_dies_past_5_t2_star():
    cfg = _tau_cfg(start=5e-6, stop=50e-6, num=40)
    result = run_tau_scan(cfg)
    ramsey = [s for _, s, _, br in result.points if br == "ramsey"]
    assert ramsey, "ramsey trace missing"
    assert max(abs(s) for s in ramsey) < 1e-9


def test_tau_scan_mc_noise_deterministic():
    cfg = _tau_cfg(num=24, mc_noise=True)
    a = run_tau_scan(cfg).points
    b = run_tau_scan(cfg).points
    assert a == b


# --- field scan ------------------------------------------------------------------------

def _field_cfg(**sweep):
    doc = default_config("field-scan")
    doc["sweep"].update(sweep)
    return validate_config(doc)


def test_field_scan_fit_and_branches():
    cfg = _field_cfg(n_reps=20000)
    result = run_field_scan(cfg)
    fit = result.fits["sinusoid"]
    assert 9.5e3 / 2 < fit["ds_db"] < 9.5e3 * 2
    by_branch = {}
    for a, s, _, br in result.points:
        by_branch.setdefault(br, []).append((a, s))
    half = dict(by_branch["p_half_pi"])
    three = dict(by_branch["p_three_half_pi"])
    # projection branches are mirror images about 1/2
    for b_val, p in half.items():
        assert p + three[b_val] == pytest.approx(1.0)
    # zero applied field sits at the fringe extremum of the expected branches
    b_center = min(half, key=abs)
    assert abs(b_center) < 1e-15
    assert half[b_center] == pytest.approx(max(half.values()), abs=1e-9)


def test_field_scan_zero_field_signal_consistent():
    cfg = _field_cfg(n_reps=200000)
    result = run_field_scan(cfg)
    s_points = [(a, s, sg) for a, s, sg, br in result.points if br == "S"]
    a0, s0, sg0 = min(s_points, key=lambda p: abs(p[0]))
    assert abs(a0) < 1e-15
    c = cfg["photon"]["contrast_c"]
    # fringe center: the cos-phase extremum brightens the pi/2 branch, which
    # lowers its excess counts, so the expected signal is -C*env/(2 - C)
    expected = -c * _field_scan_envelope() / (2.0 - c)
    assert abs(s0 - expected) < 5 * sg0


def _field_scan_envelope():
    from rotomag.sensitivity import scenario_params

    return scenario_params("ru_y").envelope()


# --- compare ------------------------------------------------------------------------------

def test_compare_slope_ordering_and_geometry():
    doc = default_config("compare")
    doc["sweep"]["n_reps"] = 100000
    result = run_compare(validate_config(doc))
    slopes = result.fits["ds_db_fitted"]
    assert slopes["ru_y"] > slopes["ramsey_z"] > slopes["ramsey_y"]
    assert result.fits["geometry_ratio_ramsey_z_over_y"] == pytest.approx(15.06, abs=0.1)
    for name in ("ramsey_y", "ramsey_z", "ru_y"):
        assert any(br == name for _, _, _, br in result.points)


# --- sensitivity tables ----------------------------------------------------------------------

def test_table1_reports():
    from rotomag.harness import run_table1

    result = run_table1(validate_config(default_config("report")))
    reports = result.fits["reports"]
    assert set(reports) == {"ramsey_y", "ramsey_z", "ru_y", "ru_y_best"}
    assert 5.8e-6 / 2 < reports["ru_y"]["eta_opr"] < 5.8e-6 * 2
    assert 35e-6 / 2 < reports["ramsey_y"]["eta_opr"] < 35e-6 * 2
    for row in reports.values():
        assert row["eta_sn_cycles"] > row["eta_sn_radians"] > 0


def test_sensitivity_covers_all_scenarios():
    from rotomag.harness import run_sensitivity
    from rotomag.sensitivity import SCENARIO_NAMES

    doc = default_config("report")
    doc["sweep"]["n_reps"] = 20000
    result = run_sensitivity(validate_config(doc))
    assert set(result.fits["reports"]) == set(SCENARIO_NAMES)


# --- output files ----------------------------------------------------------------------------

def test_csv_and_sidecar_format(tmp_path):
    cfg = _tau_cfg(num=12)
    result = run_tau_scan(cfg)
    csv_path, json_path = write_result(result, str(tmp_path), "scan")
    raw = open(csv_path, "rb").read()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert lines[0] == "abscissa,signal,sigma,branch"
    assert len(lines) == 1 + len(result.points)
    sidecar = json.loads(open(json_path).read())
    assert sidecar["metadata"]["config"]["version"] == 1
    assert sidecar["metadata"]["seed"] == cfg["seed"]


def test_rerun_byte_identical(tmp_path):
    cfg = _field_cfg(n_reps=5000, n_points=31)
    p1 = write_result(run_field_scan(cfg), str(tmp_path / "a"), "run")
    p2 = write_result(run_field_scan(cfg), str(tmp_path / "b"), "run")
    assert open(p1[0], "rb").read() == open(p2[0], "rb").read()
    assert open(p1[1], "rb").read() == open(p2[1], "rb").read()


def test_config_echo_round_trips(tmp_path):
    cfg = _field_cfg(n_reps=5000, n_points=31)
    result = run_field_scan(cfg)
    csv1, _ = write_result(result, str(tmp_path / "a"), "run")
    echoed = validate_config(result.metadata["config"])
    csv2, _ = write_result(run_field_scan(echoed), str(tmp_path / "b"), "run")
    assert open(csv1, "rb").read() == open(csv2, "rb").read()


def test_workers_do_not_change_output(tmp_path):
    cfg = _field_cfg(n_reps=5000, n_points=31)
    p1 = write_result(run_field_scan(cfg, workers=1), str(tmp_path / "a"), "run")
    p4 = write_result(run_field_scan(cfg, workers=4), str(tmp_path / "b"), "run")
    assert open(p1[0], "rb").read() == open(p4[0], "rb").read()


# --- CLI ---------------------------------------------------------------------------------------

def test_cli_tau_scan_success(tmp_path, capsys):
    out = tmp_path / "out"
    code = main(["tau-scan", "--out", str(out), "--seed", "3"])
    assert code == 0
    printed = capsys.readouterr().out.splitlines()
    assert printed[0].endswith("tau_scan.csv")
    assert printed[1].endswith("tau_scan.json")
    assert (out / "tau_scan.csv").exists()


def test_cli_field_scan_with_config(tmp_path):
    doc = default_config("field-scan")
    doc["sweep"]["n_reps"] = 2000
    doc["sweep"]["n_points"] = 21
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(doc))
    code = main(["field-scan", "--config", str(cfg_path), "--out", str(tmp_path / "o")])
    assert code == 0


def test_cli_invalid_config_exits_2(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"version": 1, "photon": {"gain": 3}}))
    code = main(["tau-scan", "--config", str(cfg_path), "--out", str(tmp_path / "o")])
    assert code == 2
    assert "photon.gain" in capsys.readouterr().err


def test_cli_negative_seed_exits_2(tmp_path):
    assert main(["tau-scan", "--seed", "-1", "--out", str(tmp_path / "o")]) == 2


def test_cli_numerical_failure_exits_3(tmp_path, capsys):
    # t2_star > t2 passes the schema but is physically inconsistent; the
    # envelope model rejects it at construction time
    doc = default_config("tau-scan")
    doc["decoherence"]["t2_star"] = 1e-3
    doc["decoherence"]["t2"] = 1e-4
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(doc))
    code = main(["tau-scan", "--config", str(cfg_path), "--out", str(tmp_path / "o")])
    assert code == 3
    assert "numerical failure" in capsys.readouterr().err


def test_cli_seed_override_changes_output(tmp_path):
    out1, out2, out3 = (tmp_path / d for d in ("a", "b", "c"))
    doc = default_config("field-scan")
    doc["sweep"]["n_reps"] = 2000
    doc["sweep"]["n_points"] = 21
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(doc))
    for out, seed in ((out1, "5"), (out2, "5"), (out3, "6")):
        assert main(["field-scan", "--config", str(cfg_path), "--seed", seed, "--out", str(out)]) == 0
    read = lambda p: open(p / "field_scan.csv", "rb").read()
    assert read(out1) == read(out2)
    assert read(out1) != read(out3)
