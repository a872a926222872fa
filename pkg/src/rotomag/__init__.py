"""rotomag: desk-scale simulator of DC magnetometry by physical rotation of
NV spin ensembles, from the time-dependent Zeeman shift through pulse-sequence
phase accumulation, decoherence and photon shot-noise readout to sensitivity
reports."""

__version__ = "0.1.0"

from .constants import D_ZFS, GAMMA_C13, GAMMA_E, HYPERFINE_14N
from .decoherence import (
    DecoherenceParams,
    echo_envelope,
    effective_bz_for_bath,
    ramsey_envelope,
    revival_modulation,
    revival_times,
)
from .pulses import (
    Pulse,
    PulseSequence,
    accumulated_phase,
    accumulated_phase_quad,
    build_cpmg,
    build_echo,
    build_ramsey,
    phase_reduction_factor,
    sign_function,
    zero_crossing_delay,
)
from .readout import (
    PhotonModel,
    TimingModel,
    projection_probability,
    shot_noise_floor,
    simulate_signal,
)
from .sensitivity import (
    FitError,
    Scenario,
    SensitivityReport,
    fit_sinusoid,
    min_detectable_field,
    operating_sensitivity,
    scenario_params,
    scenario_report,
    shot_noise_sensitivity,
    simulate_fringe,
)
from .spincore import (
    FieldVector,
    RotorNV,
    SpinHamiltonian,
    geometric_phase,
    nv_axis,
    pseudo_field,
    transition_frequency_exact,
    transition_frequency_linear,
    upconverted_field,
)
