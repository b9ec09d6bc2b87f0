import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.signal import firwin

from ofdm_sensing.channel import Target, doppler_freq
from ofdm_sensing.decimator import (decimate_grid, decimate_row, design_filter,
                                    direct_decimate_row, frequency_response, lowpass_prototype,
                                    save_taps_csv)
from ofdm_sensing.waveform import OfdmConfig

from test_preproc import _chain


def _cfg(d, q=32):
    return OfdmConfig(n_subcarriers=d * q, cp_len=q)


def test_single_tap_branch_sums_to_one(cfg):
    spec = design_filter(1, cfg)
    assert spec.length == 8
    assert spec.prototype.sum() == pytest.approx(1.0)


@pytest.mark.parametrize("p", [1, 4, 16, 48])
def test_prototype_matches_scipy_firwin(cfg, p):
    spec = design_filter(p, cfg)
    np.testing.assert_allclose(spec.prototype, firwin(p * 8, 1 / 8, window="hamming"),
                               atol=1e-15)


def test_bandpass_response(cfg):
    spec = design_filter(16, cfg)
    length, d = spec.length, spec.factor
    assert abs(abs(frequency_response(spec.taps, -np.pi / d)) - 1) <= 0.01
    w = np.linspace(-np.pi, np.pi, 40001)
    mag_db = 20 * np.log10(np.abs(frequency_response(spec.taps, w)))
    # Hamming transition band is 4 pi / L wide on either side of the passband
    stop = (w >= 4 * np.pi / length) | (w <= -2 * np.pi / d - 4 * np.pi / length)
    assert mag_db[stop].max() <= -40
    # the mirror image of the passband, where a positive-frequency tone would sit
    assert abs(frequency_response(spec.taps, np.pi / d)) < 0.01


def test_frequency_response_matches_fft(cfg):
    spec = design_filter(4, cfg)
    grid = 2 * np.pi * np.arange(64) / 64
    np.testing.assert_allclose(frequency_response(spec.taps, grid),
                               np.fft.fft(spec.taps, 64), atol=1e-13)


def test_branch_taps(cfg):
    spec = design_filter(16, cfg)
    assert spec.branch_taps.shape == (8, 16)
    for d in range(8):
        np.testing.assert_array_equal(spec.branch_taps[d], spec.taps[d::8])
    assert spec.fft_size == 256 and spec.n_out == 113


def test_design_errors(cfg):
    with pytest.raises(ValueError):
        design_filter(0, cfg)
    with pytest.raises(ValueError):
        design_filter(129, cfg)
    with pytest.raises(ValueError):
        decimate_row(np.zeros(1000), design_filter(4, cfg))
    with pytest.raises(ValueError):
        decimate_row(np.zeros(1024), design_filter(4, cfg), method="fir")


@pytest.mark.parametrize("k_r", [0, 1, 35, 64, 127, 128])
def test_tone_output(cfg, k_r):
    """Decimated tone equals H(w0) times a Q-bin tone, up to one constant phase."""
    spec = design_filter(16, cfg)
    n = np.arange(1024)
    w0 = -2 * np.pi * k_r / 1024
    out = decimate_row(np.exp(1j * w0 * n), spec)
    j = np.arange(spec.n_out)
    expected = frequency_response(spec.taps, w0) * np.exp(2j * np.pi * (64 - k_r) * j / 128)
    ratio = out / expected
    np.testing.assert_allclose(ratio, ratio[0], atol=1e-9)
    assert abs(ratio[0]) == pytest.approx(1.0, abs=1e-9)


def test_zero_row(cfg):
    spec = design_filter(8, cfg)
    out = decimate_row(np.zeros(1024, dtype=complex), spec)
    assert out.shape == (121,) and not out.any()


@pytest.mark.parametrize("d", [4, 8, 16])
@pytest.mark.parametrize("p", [1, 4, 16, 32])
def test_polyphase_matches_direct(rng, p, d):
    cfg = _cfg(d)
    spec = design_filter(p, cfg)
    rows = rng.standard_normal((10, cfg.n_subcarriers)) \
        + 1j * rng.standard_normal((10, cfg.n_subcarriers))
    ref = direct_decimate_row(rows, spec)
    scale = np.max(np.abs(ref))
    for method in ("fft", "direct"):
        assert np.max(np.abs(decimate_row(rows, spec, method) - ref)) / scale <= 1e-12


def test_impulse_response(cfg):
    spec = design_filter(16, cfg)
    length, d, p = spec.length, spec.factor, spec.taps_per_branch
    row = np.zeros(1024, dtype=complex)
    row[1024 - length] = 1
    out = decimate_row(row, spec)
    n_hat = np.arange(spec.n_out)
    sign = np.where(n_hat % 2 == 0, 1, -1)
    # the last P outputs walk through h(D-1), h(2D-1), ..., h(L-1)
    np.testing.assert_allclose(out[-p:], spec.taps[d - 1::d] * sign[-p:], atol=1e-15)
    np.testing.assert_allclose(out[:-p], 0, atol=1e-15)


def test_out_of_band_tone_suppressed(cfg):
    spec = design_filter(16, cfg)
    n = np.arange(1024)
    # +B/4 is a quarter of the sampling rate: w = pi/2
    out = decimate_row(np.exp(1j * np.pi / 2 * n), spec)
    assert 20 * np.log10(np.max(np.abs(out))) <= -40


def test_decimate_grid_single_symbol(cfg):
    spec = design_filter(16, cfg)
    _, _, grid = _chain(cfg, [Target(56.0)], 0)
    dgrid = decimate_grid(grid, spec)
    assert dgrid.shape == (1, 113)
    np.testing.assert_allclose(dgrid.values[0], decimate_row(grid.values[0], spec))


def test_decimation_keeps_doppler_phase():
    cfg = OfdmConfig(n_symbols=6)
    spec = design_filter(16, cfg)
    _, _, grid = _chain(cfg, [Target(56.0, 40.0)], 1)
    dv = decimate_grid(grid, spec).values
    step = np.exp(2j * np.pi * cfg.cp_symbol_duration * doppler_freq(40.0, cfg))
    np.testing.assert_allclose(dv[1:] / dv[:-1], step, atol=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**31), st.complex_numbers(max_magnitude=10, allow_nan=False,
                                                 allow_infinity=False),
       st.sampled_from([1, 3, 8, 16]))
def test_linearity(seed, a, p):
    rng = np.random.default_rng(seed)
    cfg = _cfg(8)
    spec = design_filter(p, cfg)
    x, y = rng.standard_normal((2, 256)) + 1j * rng.standard_normal((2, 256))
    lhs = decimate_row(a * x + y, spec)
    rhs = a * decimate_row(x, spec) + decimate_row(y, spec)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * (1 + abs(a)) * 10


def test_noise_whitening(cfg):
    spec = design_filter(16, cfg)
    rng = np.random.default_rng(7)
    sigma2 = 2.0
    rows = np.sqrt(sigma2 / 2) * (rng.standard_normal((4000, 1024))
                                  + 1j * rng.standard_normal((4000, 1024)))
    out = decimate_row(rows, spec)
    expected = sigma2 * np.sum(np.abs(spec.taps) ** 2)
    assert np.var(out) == pytest.approx(expected, rel=0.02)
    # adjacent-output correlation follows the tap autocorrelation at lag D,
    # sign-flipped by the (-1)^n shift; it is small for this design
    h = spec.taps
    lag_d = -np.sum(h[8:] * np.conj(h[:-8])) / np.sum(np.abs(h) ** 2)
    corr = np.mean(out[:, 1:] * np.conj(out[:, :-1])) / np.var(out)
    assert abs(corr - lag_d) < 0.01
    assert abs(lag_d) < 0.1
    # in-band tone keeps unit gain, so the per-sample SNR rises by about 10 log10 D
    gain_db = 10 * np.log10(sigma2 / expected)
    assert abs(gain_db - 10 * np.log10(8)) < 1.0


def test_lowpass_prototype_symmetric():
    h = lowpass_prototype(64, 8)
    np.testing.assert_allclose(h, h[::-1], atol=1e-17)


def test_taps_csv(tmp_path, cfg):
    spec = design_filter(2, cfg)
    path = tmp_path / "taps.csv"
    save_taps_csv(spec, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "l,re,im" and len(lines) == 17
    l, re, im = lines[5].split(",")
    assert int(l) == 4 and complex(float(re), float(im)) == pytest.approx(spec.taps[4], rel=1e-8)
