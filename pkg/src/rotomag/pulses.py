"""Rotation-synchronized pulse sequences and interferometric phase accumulation.

Pulses are instantaneous; the sequence's toggling sign s(t) is +1 before the
first pi pulse and flips parity at each subsequent pi pulse.  The phase
accumulated by the 0 -> -1 coherence over the sequence window is

    phi = 2*pi * integral s(t) * [gamma_e*(bz*cos(theta) + B_UC(t + delay)) + df] dt

where the axial term is the (constant) projection of the lab z field on the
NV axis, B_UC the upconverted transverse field and df an optional constant
frequency offset (temperature-shift surrogate).  The closed-form
antiderivative of the cosine is the primary evaluation path; adaptive
quadrature is kept as an independent cross-check.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .spincore import FieldVector, RotorNV, TWO_PI

HALF_PI = math.pi / 2

_ANGLE_TOL = 1e-9


@dataclass(frozen=True)
class Pulse:
    t: float                 # s, trigger-relative center time
    angle: float             # rad: pi/2, pi, 3*pi/2 or arbitrary
    kind: str = "control"    # "control" | "readout-projection"

    def __post_init__(self):
        if self.t < 0:
            raise ValueError("pulse time must be >= 0")

    @property
    def is_pi(self):
        return abs(self.angle - math.pi) < _ANGLE_TOL

    @property
    def is_half_pi_family(self):
        return abs(math.fmod(self.angle, math.pi) - HALF_PI) < _ANGLE_TOL


@dataclass(frozen=True)
class PulseSequence:
    pulses: tuple
    trigger_delay: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "pulses", tuple(self.pulses))
        if len(self.pulses) < 2:
            raise ValueError("sequence needs at least two pulses")
        times = [p.t for p in self.pulses]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("pulses must be strictly time-ordered")
        if not (self.pulses[0].is_half_pi_family and self.pulses[-1].is_half_pi_family):
            raise ValueError("first and last pulses must be pi/2-family")

    @property
    def tau(self):
        return self.pulses[-1].t - self.pulses[0].t

    @property
    def pi_pulse_times(self):
        return tuple(p.t for p in self.pulses if p.is_pi)

    def with_trigger_delay(self, delay):
        return PulseSequence(self.pulses, trigger_delay=delay)

    @property
    def readout(self):
        """'half_pi' or 'three_half_pi' depending on the final projection pulse."""
        last = self.pulses[-1].angle
        return "half_pi" if abs(last - HALF_PI) < _ANGLE_TOL else "three_half_pi"


def build_ramsey(tau, readout="half_pi"):
    """Two pi/2-family pulses separated by tau: free-induction (DC) sensing."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    final = HALF_PI if readout == "half_pi" else 3 * HALF_PI
    return PulseSequence(
        (Pulse(0.0, HALF_PI), Pulse(tau, final, kind="readout-projection"))
    )


def build_echo(tau, readout="half_pi"):
    """pi/2 at 0, pi at tau/2, projection pulse at tau."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    final = HALF_PI if readout == "half_pi" else 3 * HALF_PI
    return PulseSequence(
        (
            Pulse(0.0, HALF_PI),
            Pulse(tau / 2, math.pi),
            Pulse(tau, final, kind="readout-projection"),
        )
    )


def build_cpmg(n, tau, readout="half_pi"):
    """CPMG-n: pi pulses at tau*(2k-1)/(2n), k = 1..n; CPMG-1 is the spin echo."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if tau <= 0:
        raise ValueError("tau must be positive")
    final = HALF_PI if readout == "half_pi" else 3 * HALF_PI
    pulses = [Pulse(0.0, HALF_PI)]
    pulses += [Pulse(tau * (2 * k - 1) / (2 * n), math.pi) for k in range(1, n + 1)]
    pulses.append(Pulse(tau, final, kind="readout-projection"))
    return PulseSequence(tuple(pulses))


def sign_function(seq: PulseSequence, t):
    """Toggling sign: +1 before the first pi pulse, parity-flipped after each,
    0 outside the (first, last) pulse window."""
    t0, t1 = seq.pulses[0].t, seq.pulses[-1].t
    if t < t0 or t > t1:
        return 0
    flips = sum(tp < t for tp in seq.pi_pulse_times)
    return 1 - 2 * (flips % 2)


def _segments(seq: PulseSequence):
    """(start, stop, sign) intervals between consecutive sign flips."""
    edges = [seq.pulses[0].t, *seq.pi_pulse_times, seq.pulses[-1].t]
    sign = 1
    for a, b in zip(edges, edges[1:]):
        yield a, b, sign
        sign = -sign


def _detuning(t, b: FieldVector, r: RotorNV, seq: PulseSequence, freq_offset):
    """Instantaneous frequency detuning (Hz) sampled by the coherence."""
    alpha = r.omega * (t + seq.trigger_delay) - r.phi0
    b_uc = np.sin(r.theta_nv) * (b.by * np.cos(alpha) + b.bx * np.sin(alpha))
    return r.gamma_e * (b.bz * np.cos(r.theta_nv) + b_uc) + freq_offset


def accumulated_phase(seq: PulseSequence, b: FieldVector, r: RotorNV, freq_offset=0.0):
    """Interferometric phase in radians, closed-form segment integration."""
    axial = r.gamma_e * b.bz * np.cos(r.theta_nv) + freq_offset
    st = np.sin(r.theta_nv)
    om = r.omega
    total = 0.0
    for a, bb, s in _segments(seq):
        seg = axial * (bb - a)
        if om > 0:
            psi_a = om * (a + seq.trigger_delay) - r.phi0
            psi_b = om * (bb + seq.trigger_delay) - r.phi0
            seg += r.gamma_e * st * (
                b.by * (math.sin(psi_b) - math.sin(psi_a)) / om
                - b.bx * (math.cos(psi_b) - math.cos(psi_a)) / om
            )
        else:
            alpha = -r.phi0
            seg += r.gamma_e * st * (b.by * math.cos(alpha) + b.bx * math.sin(alpha)) * (bb - a)
        total += s * seg
    return TWO_PI * total


def accumulated_phase_quad(seq: PulseSequence, b: FieldVector, r: RotorNV, freq_offset=0.0):
    """Same phase by adaptive quadrature (cross-check path, abs tol 1e-12 rad)."""
    total = 0.0
    for a, bb, s in _segments(seq):
        val, _ = integrate.quad(
            lambda t: _detuning(t, b, r, seq, freq_offset),
            a,
            bb,
            epsabs=1e-12 / TWO_PI,
            epsrel=1e-12,
            limit=200,
        )
        total += s * val
    return TWO_PI * total


def zero_crossing_delay(seq: PulseSequence, r: RotorNV):
    """Trigger delay putting the single pi pulse on a zero crossing of B_UC.

    Solves Omega*(t_pi + delay) - phi0 = pi/2 (mod pi) for the smallest
    nonnegative delay, which maximizes |accumulated_phase| for tau below one
    rotation period.
    """
    pi_times = seq.pi_pulse_times
    if len(pi_times) != 1:
        raise ValueError("sequence must contain exactly one pi pulse")
    if r.f_rot <= 0:
        raise ValueError("stationary sensor: no zero crossing within the window")
    t_pi = pi_times[0]
    return ((HALF_PI + r.phi0 - r.omega * t_pi) % math.pi) / r.omega


def phase_reduction_factor(tau, r: RotorNV):
    """Ratio of the full-period optimal phase to the symmetric-window phase.

    Full-period phase amplitude scales as 4/Omega; a zero-crossing-centered
    window of length tau collects 2*(1 - cos(Omega*tau/2))/Omega, so the
    factor is 2/(1 - cos(Omega*tau/2)); it is 1 when tau is the full period.
    """
    if r.f_rot <= 0:
        raise ValueError("reduction factor requires a rotating sensor")
    if tau <= 0 or tau > 1.0 / r.f_rot * (1 + 1e-12):
        raise ValueError("tau must lie in (0, one rotation period]")
    return 2.0 / (1.0 - math.cos(r.omega * tau / 2.0))
