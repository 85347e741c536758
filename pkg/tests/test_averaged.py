import math

import numpy as np
import pytest

from pdcsim import (
    averaged_bogoliubov,
    averaged_calibrate,
    averaged_propagate_ode,
    averaged_tensors,
    calibrate_gain,
    propagate,
    schmidt_decompose,
    spectra,
    tpa,
)
from pdcsim.coupling import TwoPhotonAmplitude
from pdcsim.errors import CalibrationError, ConfigurationError
from pdcsim.observables import fwhm_axis, rsd
from pdcsim.rigorous import SolverSettings

from conftest import WG0, WG2

FAST = SolverSettings(steps=200)


def _synthetic_tpa(grid, values):
    """Build a TPA with prescribed Schmidt spectrum from random rotations."""
    rng = np.random.default_rng(np.random.Philox(7))
    m = grid.size
    q1 = np.linalg.qr(rng.normal(size=(m, m)))[0]
    q2 = np.linalg.qr(rng.normal(size=(m, m)))[0]
    s = np.zeros(m)
    s[: len(values)] = values
    mat = (q1 * s) @ q2.T / grid.step
    return TwoPhotonAmplitude(values=mat, grid=grid, length_mm=10.0)


def test_rank_one_schmidt(grid63):
    psi = np.exp(-np.linspace(-3, 3, grid63.size) ** 2)
    psi /= np.sqrt(grid63.step * np.sum(psi**2))
    amp = TwoPhotonAmplitude(values=np.outer(psi, psi), grid=grid63,
                             length_mm=10.0)
    modes = schmidt_decompose(amp)
    assert modes.values.size == 1
    assert modes.values[0] == pytest.approx(1.0 / grid63.step * grid63.step)
    overlap = grid63.step * np.abs(np.vdot(modes.signal_modes[:, 0], psi))
    assert overlap == pytest.approx(1.0, rel=1e-12)


def test_prescribed_singular_values(grid63):
    amp = _synthetic_tpa(grid63, [3.0, 2.0, 1.0])
    modes = schmidt_decompose(amp)
    assert modes.values == pytest.approx([3.0, 2.0, 1.0])


def test_reconstruction_round_trip(pump, grid63):
    amp = tpa(grid63, pump, WG2)
    modes = schmidt_decompose(amp)
    assert np.abs(modes.reconstruct() - amp.values).max() < 1e-8


def test_mode_orthonormality(pump, grid63):
    modes = schmidt_decompose(tpa(grid63, pump, WG2))
    for m in (modes.signal_modes, modes.idler_modes):
        gram = grid63.step * (m.conj().T @ m)
        assert np.abs(gram - np.eye(m.shape[1])).max() < 1e-10


def test_zero_gain_identity(pump, grid63):
    t = averaged_tensors(grid63, pump, WG2, 0.0)
    eye = np.eye(grid63.size)
    assert np.abs(t.ea - eye).max() < 1e-14
    assert np.abs(t.eb - eye).max() < 1e-14
    assert np.abs(t.fa).max() < 1e-14
    assert np.abs(t.fb).max() < 1e-14


def test_commutator_preserved_exactly(pump, grid63):
    t = averaged_tensors(grid63, pump, WG2, 8.0)
    assert t.commutator_residual() < 1e-10


def test_closed_form_matches_direct_integration(pump, grid63):
    gamma = 6.0
    closed = averaged_tensors(grid63, pump, WG2, gamma)
    ode = averaged_propagate_ode(grid63, pump, WG2, gamma,
                                 SolverSettings(steps=400))
    for a, b in ((closed.ea, ode.ea), (closed.fa, ode.fa),
                 (closed.eb, ode.eb), (closed.fb, ode.fb)):
        assert np.abs(a - b).max() < 1e-6


def test_low_gain_agrees_with_rigorous(pump, grid63):
    gamma = 1e-3
    avg = averaged_tensors(grid63, pump, WG2, gamma)
    rig = propagate(grid63, pump, WG2, gamma, FAST)
    n_avg, n_rig = avg.photon_number(), rig.photon_number()
    assert n_avg == pytest.approx(n_rig, rel=1e-3)
    sa, sr = spectra(avg), spectra(rig)
    assert np.abs(sa.n_s - sr.n_s).max() / sr.n_s.max() < 1e-3


def test_modes_do_not_depend_on_gain(pump, grid63):
    modes = schmidt_decompose(tpa(grid63, pump, WG2))
    lo = averaged_bogoliubov(modes, 1e-4)
    hi = averaged_bogoliubov(modes, 10.0)
    # output spectra renormalized to unit peak share the same mode content
    # at low gain; at high gain the hyperbolic weighting narrows them
    ns_lo = spectra(lo).n_s / spectra(lo).n_s.max()
    ns_hi = spectra(hi).n_s / spectra(hi).n_s.max()
    w_lo = fwhm_axis(grid63.detunings, ns_lo)
    w_hi = fwhm_axis(grid63.detunings, ns_hi)
    assert w_hi < w_lo


def test_photon_number_closed_form(pump, grid63):
    modes = schmidt_decompose(tpa(grid63, pump, WG2))
    gamma = 4.0
    expected = np.sum(np.sinh(gamma * 10.0 * modes.values) ** 2)
    t = averaged_bogoliubov(modes, gamma)
    assert t.photon_number() == pytest.approx(float(expected), rel=1e-10)
    assert modes.photon_number(gamma) == pytest.approx(float(expected))


def test_calibrate_hits_target(pump, grid63):
    modes = schmidt_decompose(tpa(grid63, pump, WG2))
    for target in (1e-5, 1.0, 1e5):
        gamma = averaged_calibrate(modes, target)
        assert modes.photon_number(gamma) == pytest.approx(target, rel=1e-6)


def test_calibrate_bad_target(pump, grid63):
    modes = schmidt_decompose(tpa(grid63, pump, WG2))
    with pytest.raises(ConfigurationError):
        averaged_calibrate(modes, 0.0)
    with pytest.raises(CalibrationError):
        averaged_calibrate(modes, 1e-300)


def test_negative_gain_rejected(pump, grid63):
    modes = schmidt_decompose(tpa(grid63, pump, WG0))
    with pytest.raises(ConfigurationError):
        averaged_bogoliubov(modes, -1.0)


def test_averaged_misses_spectral_distinguishability(pump, grid63):
    # strong second-order dispersion separates the rigorous marginals at high
    # gain; the averaged model keeps them nearly degenerate
    target = 1e5
    modes = schmidt_decompose(tpa(grid63, pump, WG2))
    g_avg = averaged_calibrate(modes, target)
    avg = averaged_bogoliubov(modes, g_avg)
    r_avg = rsd(grid63, spectra(avg).n_s, spectra(avg).n_i)
    cal = calibrate_gain(target, grid63, pump, WG2, FAST)
    s_rig = spectra(cal.tensors)
    r_rig = rsd(grid63, s_rig.n_s, s_rig.n_i)
    assert r_avg < 0.3
    assert r_rig > 1.0
    assert r_rig > 5 * r_avg
