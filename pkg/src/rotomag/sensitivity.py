"""Sensitivity analysis: fringe fitting, minimum detectable field, and the
shot-noise sensitivity formula, plus the end-to-end scenario pipeline.

A scenario run builds the pulse sequence, sweeps the scan-axis field across
the interference fringe, draws Monte Carlo photon statistics per point, fits
a sinusoid, and converts the fitted response into delta_B_min and the
sensitivities per unit bandwidth.

The shot-noise formula eta = pi/(gamma*2C*sin(theta)) * sqrt(tau+t_D)/tau is
evaluated under both gyromagnetic-ratio conventions (gamma in cycles/s/T and
in rad/s/T) because the source expression does not pin the 2*pi; reports
carry both values.
"""

import json
import math
import warnings
from dataclasses import dataclass, field, asdict
from importlib import resources

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit

from .constants import GAMMA_E
from .decoherence import (
    DecoherenceParams,
    echo_envelope,
    effective_bz_for_bath,
    ramsey_envelope,
    revival_modulation,
)
from .pulses import (
    accumulated_phase,
    build_cpmg,
    build_echo,
    build_ramsey,
    phase_reduction_factor,
    zero_crossing_delay,
)
from .readout import PhotonModel, TimingModel, projection_probability, simulate_signal
from .spincore import FieldVector, RotorNV

SCENARIO_NAMES = ("ramsey_y", "ramsey_z", "ru_y", "ru_y_best", "ru_projected")


class FitError(RuntimeError):
    """Sinusoid fit did not converge or the amplitude is consistent with zero."""


@dataclass(frozen=True)
class SinusoidFit:
    amplitude: float
    period: float
    phase: float
    offset: float
    ds_db: float           # amplitude * 2*pi/period: slope at the steepest point
    amplitude_err: float
    period_err: float
    chi2: float


@dataclass(frozen=True)
class SensitivityReport:
    scenario: str
    ds_db: float                 # fitted response, 1/T
    ds_db_analytic: float        # closed-form response, 1/T
    sigma: float                 # representative signal standard error
    delta_b_min: float           # T
    eta_opr: float               # T/sqrt(Hz), delta_b_min*sqrt(t_int)
    eta_sn_cycles: float         # T/sqrt(Hz), shot-noise formula, gamma in Hz/T
    eta_sn_radians: float        # T/sqrt(Hz), gamma in rad/s/T
    t_int: float
    tau: float
    dead_time: float
    n_reps: int
    phase_reduction: float       # full-period/window phase ratio (1 if full period)
    fit: SinusoidFit


def fit_sinusoid(points):
    """Weighted least-squares sinusoid fit of (field, signal, sigma) triples.

    Returns a SinusoidFit whose ds_db is the response slope at the steepest
    fringe point.  Raises FitError on non-convergence or when the fitted
    amplitude is consistent with zero.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 5:
        raise ValueError("need at least 5 (field, signal, sigma) points")
    b, y = pts[:, 0], pts[:, 1]
    sig = pts[:, 2] if pts.shape[1] > 2 else np.zeros_like(b)
    span = b.max() - b.min()
    if span <= 0:
        raise ValueError("field values must span a nonzero range")

    # initial guesses: FFT for the dominant fringe frequency
    order = np.argsort(b)
    b_s, y_s = b[order], y[order]
    yc = y_s - y_s.mean()
    spec = np.abs(np.fft.rfft(yc))
    freqs = np.fft.rfftfreq(len(b_s), d=span / (len(b_s) - 1))
    k0 = freqs[1 + np.argmax(spec[1:])]
    if k0 <= 0:
        k0 = 0.5 / span
    a0 = math.sqrt(2.0) * yc.std()
    cphi = float(np.sum(yc * np.cos(2 * np.pi * k0 * b_s)))
    sphi = float(np.sum(yc * np.sin(2 * np.pi * k0 * b_s)))
    p0 = [a0, 1.0 / k0, math.atan2(cphi, sphi), float(y_s.mean())]

    def model(x, amp, period, phase, offset):
        return amp * np.sin(2 * np.pi * x / period + phase) + offset

    has_sigma = np.all(sig > 0)
    try:
        with warnings.catch_warnings():
            # degenerate covariance is handled below via the amplitude check
            warnings.simplefilter("ignore", OptimizeWarning)
            popt, pcov = curve_fit(
                model,
                b,
                y,
                p0=p0,
                sigma=sig if has_sigma else None,
                absolute_sigma=has_sigma,
                maxfev=20000,
            )
    except RuntimeError as exc:
        resid = y - model(b, *p0)
        raise FitError(
            f"sinusoid fit did not converge (rms residual at start {resid.std():.3e})"
        ) from exc

    amp, period, phase, offset = popt
    if amp < 0:
        amp, phase = -amp, phase + math.pi
    period = abs(period)
    phase = math.remainder(phase, 2 * math.pi)
    perr = np.sqrt(np.abs(np.diag(pcov)))
    if not np.all(np.isfinite(perr)):
        perr = np.full(4, np.inf)
    if amp < 2.0 * perr[0]:
        raise FitError(
            f"fitted amplitude {amp:.3e} consistent with zero (err {perr[0]:.3e})"
        )
    resid = y - model(b, amp, period, phase, offset)
    chi2 = float(np.sum((resid / sig) ** 2)) if has_sigma else float(np.sum(resid**2))
    return SinusoidFit(
        amplitude=float(amp),
        period=float(period),
        phase=float(phase),
        offset=float(offset),
        ds_db=float(amp * 2 * math.pi / period),
        amplitude_err=float(perr[0]),
        period_err=float(perr[1]),
        chi2=chi2,
    )


def min_detectable_field(sigma, ds_db):
    """Figure of merit delta_B_min = sigma / (dS/dB), in tesla."""
    if ds_db <= 0:
        raise ValueError("response dS/dB must be positive")
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    return sigma / ds_db


def operating_sensitivity(delta_b_min, t_int):
    """Sensitivity per unit bandwidth: delta_B_min * sqrt(T_int)."""
    if t_int <= 0:
        raise ValueError("t_int must be positive")
    return delta_b_min * math.sqrt(t_int)


def shot_noise_sensitivity(c, theta_nv, tau, t_d, gamma_e=GAMMA_E, convention="radians"):
    """Shot-noise-limited sensitivity pi/(gamma*2C*sin(theta)) * sqrt(tau+t_D)/tau.

    convention: "cycles" uses gamma_e as given (Hz/T); "radians" multiplies
    by 2*pi.  Both are reported upstream because the source convention is
    ambiguous.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    if not 0.0 < c < 1.0:
        raise ValueError("c must lie in (0, 1)")
    if theta_nv <= 0 or math.sin(theta_nv) == 0:
        raise ValueError("theta_nv = 0 gives no transverse response (infinite eta)")
    if t_d < 0:
        raise ValueError("t_d must be >= 0")
    if convention == "cycles":
        gamma = gamma_e
    elif convention == "radians":
        gamma = 2 * math.pi * gamma_e
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return math.pi / (gamma * 2 * c * math.sin(theta_nv)) * math.sqrt(tau + t_d) / tau


@dataclass(frozen=True)
class Scenario:
    """Resolved parameter set for one sensing configuration."""

    name: str
    sequence: str
    n_pulses: int
    tau: float
    f_rot: float
    theta_nv: float
    eq4_theta: float
    bias_bz: float
    scan_axis: str
    scan_halfspan: float
    scan_points: int
    n_reps: int
    t_int: float
    excess_noise_db: float
    rate: float
    read_window: float
    contrast_c: float
    t2_star: float
    t2: float
    stretch_n: float
    revival_width: float
    include_revivals: bool
    periods_per_shot: int
    laser_pulse: float
    extra_dead_time: float
    table_ds_db: float = None
    table_eta_opr: float = None
    table_eta_sn: float = None

    @property
    def rotor(self):
        return RotorNV(f_rot=self.f_rot, theta_nv=self.theta_nv)

    @property
    def decoherence(self):
        return DecoherenceParams(
            t2_star=self.t2_star,
            t2=self.t2,
            stretch_n=self.stretch_n,
            revival_width=self.revival_width,
        )

    @property
    def timing(self):
        return TimingModel(
            laser_pulse=self.laser_pulse,
            rotation_period=1.0 / self.f_rot if self.f_rot > 0 else 0.0,
            periods_per_shot=self.periods_per_shot,
            tau=self.tau,
            extra_dead_time=self.extra_dead_time,
        )

    def photon_model(self, n_reps=None):
        return PhotonModel(
            rate=self.rate,
            read_window=self.read_window,
            contrast_c=self.contrast_c,
            excess_noise_db=self.excess_noise_db,
            n_reps=int(n_reps if n_reps is not None else self.n_reps),
        )

    def field_at(self, scan_value):
        axis = {"x": "bx", "y": "by", "z": "bz"}[self.scan_axis]
        kw = {"bx": 0.0, "by": 0.0, "bz": self.bias_bz}
        kw[axis] = kw[axis] + scan_value
        return FieldVector(**kw)

    def build_sequence(self):
        if self.sequence == "ramsey":
            return build_ramsey(self.tau), build_ramsey(self.tau, "three_half_pi")
        if self.sequence == "echo":
            seq = build_echo(self.tau)
            delay = zero_crossing_delay(seq, self.rotor) if self.f_rot > 0 else 0.0
            return (
                seq.with_trigger_delay(delay),
                build_echo(self.tau, "three_half_pi").with_trigger_delay(delay),
            )
        if self.sequence == "cpmg":
            seq = build_cpmg(self.n_pulses, self.tau)
            # max response: start the window at a field extremum, psi(0) = pi/2
            delay = (math.pi / 2 % math.pi) / self.rotor.omega if self.f_rot > 0 else 0.0
            return (
                seq.with_trigger_delay(delay),
                build_cpmg(self.n_pulses, self.tau, "three_half_pi").with_trigger_delay(delay),
            )
        raise ValueError(f"unknown sequence kind {self.sequence!r}")

    def envelope(self):
        p = self.decoherence
        if self.sequence == "ramsey":
            return float(ramsey_envelope(self.tau, p))
        env = float(echo_envelope(self.tau, p))
        if self.include_revivals:
            b_eff = effective_bz_for_bath(self.bias_bz, self.f_rot)
            env *= float(revival_modulation(self.tau, b_eff, p))
        return env


def _load_scenarios():
    text = resources.files("rotomag.data").joinpath("scenarios.json").read_text()
    raw = json.loads(text)
    return {name: Scenario(name=name, **kw) for name, kw in raw["scenarios"].items()}


def scenario_params(name):
    """Shipped defaults for one of the named scenarios."""
    table = _load_scenarios()
    if name not in table:
        raise ValueError(f"unknown scenario {name!r}; choose from {sorted(table)}")
    return table[name]


def phase_response_slope(scn: Scenario):
    """Closed-form d(phase)/dB along the scan axis, rad/T (exact: phase is linear)."""
    seq, _ = scn.build_sequence()
    delta = max(scn.scan_halfspan, 1e-9)
    hi = accumulated_phase(seq, scn.field_at(delta), scn.rotor)
    lo = accumulated_phase(seq, scn.field_at(-delta), scn.rotor)
    return (hi - lo) / (2 * delta)


def analytic_response(scn: Scenario):
    """Noise-free (dS/dB, fringe amplitude, phase slope) for a scenario."""
    c = scn.contrast_c
    amp = c * scn.envelope() / (2.0 - c)
    slope = phase_response_slope(scn)
    return amp * abs(slope), amp, slope


def simulate_fringe(scn: Scenario, seed=0, n_reps=None, n_points=None, workers=1):
    """Monte Carlo field scan across the fringe.

    Returns (points, phases): points is a list of (field, signal, sigma) with
    per-point RNG streams keyed by (seed, index), so the result is
    independent of the worker count.
    """
    seq_half, _ = scn.build_sequence()
    env = scn.envelope()
    pm = scn.photon_model(n_reps)
    n_pts = int(n_points if n_points is not None else scn.scan_points)
    fields = np.linspace(-scn.scan_halfspan, scn.scan_halfspan, n_pts)
    phases = [accumulated_phase(seq_half, scn.field_at(float(b)), scn.rotor) for b in fields]

    def one(idx):
        phi = phases[idx]
        p_half = float(projection_probability(phi, env, "half_pi"))
        p_threehalf = float(projection_probability(phi, env, "three_half_pi"))
        s, sg = simulate_signal(p_half, p_threehalf, pm, seed=[seed, idx])
        return (float(fields[idx]), s, sg)

    if workers and workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(one, range(n_pts)))
    else:
        points = [one(i) for i in range(n_pts)]
    return points, phases


def scenario_report(name, seed=0, n_reps=None, n_points=None, workers=1):
    """Full pipeline: sequence -> phase -> envelopes -> MC readout -> fit -> report."""
    scn = name if isinstance(name, Scenario) else scenario_params(name)
    points, _ = simulate_fringe(scn, seed=seed, n_reps=n_reps, n_points=n_points, workers=workers)
    fit = fit_sinusoid(points)
    ds_db_analytic, _, _ = analytic_response(scn)
    sigma = float(np.median([p[2] for p in points]))
    delta_b = min_detectable_field(sigma, fit.ds_db)
    t_d = scn.timing.dead_time
    if scn.f_rot > 0 and scn.tau <= 1.0 / scn.f_rot * (1 + 1e-12):
        reduction = phase_reduction_factor(scn.tau, scn.rotor)
    else:
        reduction = 1.0
    return SensitivityReport(
        scenario=scn.name,
        ds_db=fit.ds_db,
        ds_db_analytic=ds_db_analytic,
        sigma=sigma,
        delta_b_min=delta_b,
        eta_opr=operating_sensitivity(delta_b, scn.t_int),
        eta_sn_cycles=shot_noise_sensitivity(
            scn.contrast_c, scn.eq4_theta, scn.tau, t_d, convention="cycles"
        ),
        eta_sn_radians=shot_noise_sensitivity(
            scn.contrast_c, scn.eq4_theta, scn.tau, t_d, convention="radians"
        ),
        t_int=scn.t_int,
        tau=scn.tau,
        dead_time=t_d,
        n_reps=pm_reps(scn, n_reps),
        phase_reduction=reduction,
        fit=fit,
    )


def pm_reps(scn: Scenario, n_reps):
    return int(n_reps if n_reps is not None else scn.n_reps)


def report_as_dict(report: SensitivityReport):
    return asdict(report)
