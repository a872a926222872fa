"""Phenomenological coherence envelopes.

Ramsey contrast decays on T2* with a Gaussian quasi-static envelope times a
three-line 14N hyperfine beat.  Spin-echo contrast carries a stretched
exponential exp(-(tau/T2)^n) modulated by the 13C collapse-revival comb,
whose revival times shift with the rotation pseudo-field.

Revival condition adopted here: tau_j = 2*j / (gamma_c13 * Bz_eff), twice
the nuclear Larmor period per revival, which puts the fourth revival near
124 us at the 5.7 mT + pseudo-field operating point.
"""

import math
from dataclasses import dataclass

import numpy as np

from .constants import GAMMA_C13, HYPERFINE_14N
from .spincore import pseudo_field


@dataclass(frozen=True)
class DecoherenceParams:
    t2_star: float = 0.71e-6        # s
    t2: float = 250e-6              # s, field-dependent; config-exposed
    stretch_n: float = 2.0          # echo envelope exponent
    gamma_c13: float = GAMMA_C13    # Hz/T
    hyperfine_a: float = HYPERFINE_14N  # Hz
    revival_width: float = 4e-6     # s, Gaussian comb width
    ramsey_detuning: float = 0.0    # Hz

    def __post_init__(self):
        if self.t2_star >= self.t2:
            raise ValueError("t2_star must be smaller than t2")
        if self.stretch_n < 1:
            raise ValueError("stretch_n must be >= 1")
        if self.revival_width <= 0:
            raise ValueError("revival_width must be positive")


def ramsey_envelope(tau, p: DecoherenceParams):
    """Gaussian T2* decay times the three-line hyperfine beat, in [-1, 1]."""
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise ValueError("tau must be >= 0")
    gauss = np.exp(-((tau / p.t2_star) ** 2))
    beat = (1.0 + 2.0 * np.cos(2 * np.pi * p.hyperfine_a * tau)) / 3.0
    osc = np.cos(2 * np.pi * p.ramsey_detuning * tau)
    return gauss * beat * osc


def echo_envelope(tau, p: DecoherenceParams):
    """Stretched-exponential spin-echo decay exp(-(tau/T2)^n), in [0, 1]."""
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise ValueError("tau must be >= 0")
    return np.exp(-((tau / p.t2) ** p.stretch_n))


def revival_times(b_z_eff, p: DecoherenceParams, j_max):
    """13C revival times tau_j = 2*j/(gamma_c13 * Bz_eff), j = 1..j_max."""
    if b_z_eff <= 0:
        raise ValueError("no revivals: effective axial field must be positive")
    if j_max < 1:
        raise ValueError("j_max must be >= 1")
    j = np.arange(1, j_max + 1, dtype=float)
    return 2.0 * j / (p.gamma_c13 * b_z_eff)


def revival_modulation(tau, b_z_eff, p: DecoherenceParams):
    """Gaussian revival comb (tau_0 = 0 included), clipped to [0, 1].

    Full echo contrast is revival_modulation * echo_envelope.
    """
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise ValueError("tau must be >= 0")
    spacing = 2.0 / (p.gamma_c13 * b_z_eff) if b_z_eff > 0 else math.inf
    if not np.isfinite(spacing):
        return np.ones_like(tau)  # no 13C precession: comb degenerates to 1
    j_hi = int(np.ceil((np.max(tau) + 6 * p.revival_width) / spacing)) + 1
    centers = spacing * np.arange(0, j_hi + 1, dtype=float)
    comb = np.exp(-((tau[..., None] - centers) ** 2) / (2 * p.revival_width**2)).sum(axis=-1)
    return np.minimum(comb, 1.0)


def effective_bz_for_bath(b_z, f_rot, sense="counter"):
    """Axial field seen by the 13C bath: bias plus the rotation pseudo-field."""
    return b_z + pseudo_field(f_rot, GAMMA_C13, sense)
