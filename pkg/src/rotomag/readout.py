"""Monte Carlo photon-counting readout.

Each experiment repetition ends in a fluorescence readout whose mean photon
number is rate*read_window*(1 - C*P), with P the projection probability of
the readout branch and C the aggregate state readout efficiency.  Counts are
Poisson; repetitions aggregate, and the normalized signal is

    S = (N_half - N_threehalf) / (N_half + N_threehalf).

Reported uncertainties are the analytic Poisson propagation through S at the
expected branch means, inflated by the configured excess noise (amplitude dB,
factor 10**(dB/20)).  Determinism contract: per-point RNG streams are keyed
by (seed, point-index), e.g. numpy.random.default_rng([seed, index]).
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PhotonModel:
    rate: float = 3e6            # counts/s
    read_window: float = 0.3e-6  # s, effective counting gate per shot
    contrast_c: float = 0.02     # aggregate state readout efficiency C
    excess_noise_db: float = 0.0  # amplitude dB above photon shot noise
    n_reps: int = 1

    def __post_init__(self):
        if self.rate <= 0 or self.read_window <= 0:
            raise ValueError("rate and read_window must be positive")
        if not 0.0 < self.contrast_c < 1.0:
            raise ValueError("contrast_c must lie in (0, 1)")
        if self.n_reps < 1:
            raise ValueError("n_reps must be >= 1")

    @property
    def noise_inflation(self):
        return 10.0 ** (self.excess_noise_db / 20.0)


@dataclass(frozen=True)
class TimingModel:
    laser_pulse: float = 3e-6
    rotation_period: float = 0.0
    periods_per_shot: int = 2
    tau: float = 0.0
    extra_dead_time: float = 0.0  # stationary-sequence margin beyond the laser pulse

    def __post_init__(self):
        if self.rotation_period > 0 and self.dead_time < 0:
            raise ValueError("dead time would be negative: tau exceeds the shot window")

    @property
    def dead_time(self):
        """Per-shot time not spent accumulating phase.

        Rotating: periods_per_shot * rotation_period - tau.  Stationary:
        laser pulse plus a configurable margin.
        """
        if self.rotation_period > 0:
            return self.periods_per_shot * self.rotation_period - self.tau
        return self.laser_pulse + self.extra_dead_time


def projection_probability(phase, envelope, readout):
    """Readout-branch projection probability (1 +/- envelope*cos(phase))/2."""
    envelope = np.asarray(envelope, dtype=float)
    if np.any(np.abs(envelope) > 1 + 1e-12):
        raise ValueError("envelope must lie in [-1, 1]")
    sign = {"half_pi": 1.0, "three_half_pi": -1.0}[readout]
    return (1.0 + sign * envelope * np.cos(phase)) / 2.0


def _branch_means(p_half, p_threehalf, pm: PhotonModel):
    per_shot = pm.rate * pm.read_window
    m_half = pm.n_reps * per_shot * (1.0 - pm.contrast_c * p_half)
    m_threehalf = pm.n_reps * per_shot * (1.0 - pm.contrast_c * p_threehalf)
    if m_half <= 0 or m_threehalf <= 0:
        raise ValueError("expected photon counts must be positive")
    return m_half, m_threehalf


def _propagated_sigma(m_half, m_threehalf):
    # delta-method variance of (a-b)/(a+b) for independent Poisson a, b
    return math.sqrt(4.0 * m_half * m_threehalf / (m_half + m_threehalf) ** 3)


def simulate_signal(p_half, p_threehalf, pm: PhotonModel, seed):
    """One Monte Carlo evaluation of the normalized signal.

    Returns (S, sigma); sigma is the shot-noise standard error at the
    expected branch means times the excess-noise inflation.
    """
    if not (0.0 <= p_half <= 1.0 and 0.0 <= p_threehalf <= 1.0):
        raise ValueError("branch probabilities must lie in [0, 1]")
    m_half, m_threehalf = _branch_means(p_half, p_threehalf, pm)
    rng = np.random.default_rng(seed)
    n_half = rng.poisson(m_half)
    n_threehalf = rng.poisson(m_threehalf)
    total = n_half + n_threehalf
    if total == 0:
        raise RuntimeError("no photons detected in either branch")
    signal = (n_half - n_threehalf) / total
    sigma = _propagated_sigma(m_half, m_threehalf) * pm.noise_inflation
    return float(signal), float(sigma)


def shot_noise_floor(pm: PhotonModel, p_half=0.5, p_threehalf=0.5):
    """Analytic shot-noise standard error of S (no excess-noise inflation).

    Independent oracle for the Monte Carlo sampling in simulate_signal.
    """
    m_half, m_threehalf = _branch_means(p_half, p_threehalf, pm)
    return _propagated_sigma(m_half, m_threehalf)
