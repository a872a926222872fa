"""Coherence envelopes: Ramsey decay, echo decay, 13C revival comb."""

import numpy as np
import pytest

from rotomag.constants import GAMMA_C13
from rotomag.decoherence import (
    DecoherenceParams,
    echo_envelope,
    effective_bz_for_bath,
    ramsey_envelope,
    revival_modulation,
    revival_times,
)

P = DecoherenceParams()


# --- ramsey_envelope -----------------------------------------------------------

def test_ramsey_full_contrast_at_zero():
    assert ramsey_envelope(0.0, P) == 1.0


def test_ramsey_gaussian_factor_at_t2_star():
    # isolate the Gaussian by dividing out the hyperfine beat
    tau = P.t2_star
    beat = (1 + 2 * np.cos(2 * np.pi * P.hyperfine_a * tau)) / 3
    assert ramsey_envelope(tau, P) / beat == pytest.approx(np.exp(-1))


def test_ramsey_hyperfine_null():
    tau = 1.0 / (3 * P.hyperfine_a)
    assert abs(ramsey_envelope(tau, P)) < 1e-12


def test_ramsey_bounded_and_detuning_oscillates():
    taus = np.linspace(0, 5e-6, 301)
    env = ramsey_envelope(taus, P)
    assert np.all(np.abs(env) <= 1.0)
    pd = DecoherenceParams(ramsey_detuning=2e6)
    quarter = 1.0 / (4 * 2e6)
    assert abs(ramsey_envelope(quarter, pd)) < 1e-12


def test_ramsey_rejects_negative_tau():
    with pytest.raises(ValueError):
        ramsey_envelope(-1e-6, P)


# --- echo_envelope ---------------------------------------------------------------

def test_echo_full_contrast_at_zero():
    assert echo_envelope(0.0, P) == 1.0


def test_echo_e_inverse_at_t2():
    assert echo_envelope(P.t2, P) == pytest.approx(np.exp(-1))


def test_echo_monotone_decreasing():
    taus = np.linspace(0, 1e-3, 400)
    env = echo_envelope(taus, P)
    assert np.all(np.diff(env) <= 0)
    assert np.all((env >= 0) & (env <= 1))


def test_params_validation():
    with pytest.raises(ValueError):
        DecoherenceParams(t2_star=1e-3, t2=1e-4)
    with pytest.raises(ValueError):
        DecoherenceParams(stretch_n=0.5)
    with pytest.raises(ValueError):
        DecoherenceParams(revival_width=0.0)


# --- revival_times ---------------------------------------------------------------

def test_revival_times_stationary_bias():
    taus = revival_times(5.7e-3, P, 4)
    assert taus[0] == pytest.approx(32.79e-6, rel=1e-3)
    assert taus[3] == pytest.approx(131.17e-6, rel=1e-3)


def test_revival_times_with_pseudo_field():
    b_eff = effective_bz_for_bath(5.7e-3, 3333.0)
    tau4 = revival_times(b_eff, P, 4)[3]
    assert 123e-6 < tau4 < 126e-6


def test_revival_times_inverse_in_field():
    assert np.allclose(revival_times(11.4e-3, P, 6), revival_times(5.7e-3, P, 6) / 2)


def test_revival_times_errors():
    with pytest.raises(ValueError):
        revival_times(0.0, P, 4)
    with pytest.raises(ValueError):
        revival_times(5.7e-3, P, 0)


# --- revival_modulation ------------------------------------------------------------

def test_modulation_one_at_zero():
    assert revival_modulation(0.0, 5.7e-3, P) == pytest.approx(1.0)


def test_modulation_peaks_at_revivals():
    taus = revival_times(5.7e-3, P, 4)
    assert np.allclose(revival_modulation(taus, 5.7e-3, P), 1.0, atol=1e-6)


def test_modulation_collapses_between_revivals():
    spacing = 2.0 / (GAMMA_C13 * 5.7e-3)
    mid = 1.5 * spacing
    assert revival_modulation(mid, 5.7e-3, P) < 0.05


def test_modulation_bounded():
    taus = np.linspace(0, 3e-4, 1000)
    m = revival_modulation(taus, 6.01e-3, P)
    assert np.all((m >= 0) & (m <= 1))


def test_comb_compression_is_j_independent():
    stat = revival_times(5.7e-3, P, 8)
    rot = revival_times(effective_bz_for_bath(5.7e-3, 3333.0), P, 8)
    ratios = rot / stat
    assert np.allclose(ratios, ratios[0])


# --- effective_bz_for_bath -----------------------------------------------------------

def test_effective_bz_no_rotation():
    assert effective_bz_for_bath(5.7e-3, 0.0) == 5.7e-3


def test_effective_bz_counter_rotation_adds():
    assert effective_bz_for_bath(5.7e-3, 3333.0) == pytest.approx(6.01e-3, rel=1e-3)


def test_effective_bz_co_rotation_subtracts():
    assert effective_bz_for_bath(5.7e-3, 3333.0, "co") == pytest.approx(5.39e-3, rel=1e-3)
