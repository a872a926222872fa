"""Field geometry and NV transition frequencies.

The sensor is a spin-1 NV center whose symmetry axis sits on a cone of
half-angle theta_nv around the lab z axis and is swept around it at the
rotation frequency.  Transverse lab fields then appear, in the NV frame, as
a Zeeman modulation at the rotation frequency; axial fields project with a
constant cos(theta_nv).

Azimuth convention: alpha = Omega*t - phi0 is the angle between the NV-axis
transverse projection (negated) and the +y lab axis, chosen so that a pure
y-field reproduces

    omega(t) = omega0 + gamma_e * by * sin(theta_nv) * cos(Omega*t - phi0)

and a pure x-field couples through sin(Omega*t - phi0).
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .constants import D_ZFS, GAMMA_E, LINEAR_FIELD_BOUND

TWO_PI = 2.0 * np.pi

# Spin-1 operator matrices in the NV eigenbasis (|+1>, |0>, |-1>).
SPIN1_X = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex) / np.sqrt(2)
SPIN1_Y = np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=complex) / np.sqrt(2)
SPIN1_Z = np.diag([1.0, 0.0, -1.0]).astype(complex)


class LinearizationWarning(UserWarning):
    """Transverse field exceeds the bound where the linear Zeeman model holds."""


class DegenerateLevelsWarning(RuntimeWarning):
    """Eigenvalues too close to assign transition branches unambiguously."""


@dataclass(frozen=True)
class FieldVector:
    """Static laboratory magnetic field, components in tesla."""

    bx: float = 0.0
    by: float = 0.0
    bz: float = 0.0

    def __post_init__(self):
        if not all(np.isfinite([self.bx, self.by, self.bz])):
            raise ValueError("field components must be finite")

    @property
    def magnitude(self):
        return float(np.sqrt(self.bx**2 + self.by**2 + self.bz**2))

    @property
    def transverse(self):
        """Magnitude of the component transverse to the rotation (z) axis."""
        return float(np.hypot(self.bx, self.by))


@dataclass(frozen=True)
class RotorNV:
    """Rotating NV sensor: rotation rate, cone angle and spin constants."""

    f_rot: float = 0.0          # Hz, rotation frequency (Omega = 2*pi*f_rot)
    theta_nv: float = 0.0       # rad, angle between NV axis and rotation axis
    phi0: float = 0.0           # rad, initial rotation phase
    d_zfs: float = D_ZFS        # Hz
    gamma_e: float = GAMMA_E    # Hz/T

    def __post_init__(self):
        if not 0.0 <= self.theta_nv <= np.pi:
            raise ValueError("theta_nv must lie in [0, pi]")
        if self.f_rot < 0:
            raise ValueError("f_rot must be >= 0")
        if self.d_zfs <= 0 or self.gamma_e <= 0:
            raise ValueError("d_zfs and gamma_e must be positive")

    @property
    def omega(self):
        return TWO_PI * self.f_rot


@dataclass(frozen=True)
class SpinHamiltonian:
    """Spin-1 Hamiltonian D*Sz'^2 + gamma_e * S.B with the field in the NV frame."""

    d_zfs: float = D_ZFS
    gamma_e: float = GAMMA_E
    field_nv_frame: FieldVector = field(default_factory=FieldVector)

    def matrix(self):
        b = self.field_nv_frame
        h = self.d_zfs * (SPIN1_Z @ SPIN1_Z)
        h = h + self.gamma_e * (b.bx * SPIN1_X + b.by * SPIN1_Y + b.bz * SPIN1_Z)
        return h


def nv_axis(t, r: RotorNV):
    """Instantaneous NV-axis unit vector in the lab frame.

    The z component is cos(theta_nv) for all t; the transverse part sweeps
    at the rotation frequency with the azimuth convention above.
    """
    alpha = r.omega * np.asarray(t, dtype=float) - r.phi0
    s = np.sin(r.theta_nv)
    return np.stack(
        [-s * np.sin(alpha), -s * np.cos(alpha), np.cos(r.theta_nv) * np.ones_like(alpha)],
        axis=-1,
    )


def _warn_if_nonlinear(b: FieldVector, r: RotorNV):
    if b.transverse > LINEAR_FIELD_BOUND:
        warnings.warn(
            f"transverse field {b.transverse:.2e} T exceeds the linearization "
            f"bound {LINEAR_FIELD_BOUND:.1e} T; linear Zeeman model is degraded",
            LinearizationWarning,
            stacklevel=3,
        )


def upconverted_field(t, b: FieldVector, r: RotorNV):
    """Transverse DC field as seen along the rotating NV axis, in tesla.

    B_UC(t) = sin(theta_nv) * (by*cos(Omega*t - phi0) + bx*sin(Omega*t - phi0))
    """
    _warn_if_nonlinear(b, r)
    alpha = r.omega * np.asarray(t, dtype=float) - r.phi0
    return np.sin(r.theta_nv) * (b.by * np.cos(alpha) + b.bx * np.sin(alpha))


def transition_frequency_linear(t, b: FieldVector, r: RotorNV):
    """Linearized 0 -> -1 transition frequency in Hz.

    omega(t) = d_zfs - gamma_e*bz*cos(theta_nv) + gamma_e*B_UC(t)
    """
    omega0 = r.d_zfs - r.gamma_e * b.bz * np.cos(r.theta_nv)
    return omega0 + r.gamma_e * upconverted_field(t, b, r)


def transition_frequency_exact(h: SpinHamiltonian, degeneracy_tol=1.0):
    """Numerically exact (0 -> -1, 0 -> +1) transition frequencies in Hz.

    Diagonalizes the 3x3 Hamiltonian; the lowest eigenvalue is taken as the
    m_s = 0 reference, valid while gamma_e*|B| << d_zfs.  Near a level
    crossing the branch assignment is ambiguous and a DegenerateLevelsWarning
    is emitted rather than silently ordering the pair.
    """
    if not np.isfinite(h.field_nv_frame.magnitude):
        raise ValueError("field must be finite")
    evals = np.linalg.eigvalsh(h.matrix())
    evals.sort()
    gaps = np.diff(evals)
    if np.any(gaps < degeneracy_tol) and h.field_nv_frame.magnitude > 0:
        warnings.warn(
            f"near-degenerate eigenvalues (gaps {gaps}); transition branches ambiguous",
            DegenerateLevelsWarning,
            stacklevel=2,
        )
    return float(evals[1] - evals[0]), float(evals[2] - evals[0])


def pseudo_field(f_rot, gamma_nuc, sense="counter"):
    """Rotation-induced pseudo-field seen by nuclear spins, in tesla.

    Positive (adds to the bias) when the rotation opposes the nuclear
    precession ("counter"), negative when co-rotating.
    """
    if gamma_nuc <= 0:
        raise ValueError("gamma_nuc must be positive")
    if sense not in ("co", "counter"):
        raise ValueError(f"sense must be 'co' or 'counter', got {sense!r}")
    sign = 1.0 if sense == "counter" else -1.0
    return sign * f_rot / gamma_nuc


def geometric_phase(theta_nv, n_rot):
    """Solid-angle (Berry) phase of the 0 -> -1 coherence, in radians.

    One revolution of the NV axis on a cone of half-angle theta_nv subtends
    2*pi*(1 - cos(theta_nv)); the phase is additive in the number of turns.
    """
    if not 0.0 <= theta_nv <= np.pi:
        raise ValueError("theta_nv must lie in [0, pi]")
    return n_rot * TWO_PI * (1.0 - np.cos(theta_nv))
