import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ofdm_sensing.waveform import (DataGrid, OfdmConfig, QPSK_ALPHABET, demodulate,
                                   generate_data, modulate)


@st.composite
def small_configs(draw):
    log_n = draw(st.integers(3, 8))
    log_q = draw(st.integers(1, log_n - 1))
    return OfdmConfig(n_subcarriers=2**log_n, cp_len=2**log_q,
                      n_symbols=draw(st.integers(1, 6)))


def test_derived_constants(cfg):
    assert cfg.sample_time == pytest.approx(11e-6 / 1024)
    assert cfg.bandwidth == pytest.approx(1024 / 11e-6)
    assert cfg.bandwidth * cfg.sample_time == pytest.approx(1.0)
    assert cfg.cp_symbol_duration == pytest.approx(12.375e-6)
    assert cfg.decimation == 8
    assert cfg.wavelength == pytest.approx(0.0125)


@pytest.mark.parametrize("kwargs", [
    dict(n_subcarriers=1000), dict(cp_len=100), dict(cp_len=1024),
    dict(cp_len=2048), dict(n_symbols=0),
])
def test_invalid_config(kwargs):
    with pytest.raises(ValueError):
        OfdmConfig(**kwargs)


def test_generate_data_deterministic(cfg):
    a = generate_data(cfg, 7)
    b = generate_data(cfg, 7)
    np.testing.assert_array_equal(a.symbols, b.symbols)
    assert not np.array_equal(a.symbols, generate_data(cfg, 8).symbols)


def test_generate_data_qpsk(cfg256):
    data = generate_data(cfg256, 1)
    assert data.shape == (256, 1024)
    np.testing.assert_allclose(np.abs(data.symbols), 1.0, atol=1e-15)
    assert np.all(np.isin(data.symbols, QPSK_ALPHABET))
    # all four points used, roughly uniformly
    counts = [np.sum(data.symbols == s) for s in QPSK_ALPHABET]
    assert min(counts) > 0.24 * data.symbols.size


def test_grids_are_read_only(cfg):
    data = generate_data(cfg, 0)
    with pytest.raises(ValueError):
        data.symbols[0, 0] = 0


def test_modulate_all_ones():
    cfg = OfdmConfig(n_subcarriers=64, cp_len=16)
    tx = modulate(DataGrid(np.ones((1, 64))), cfg)
    expected = np.zeros(64)
    expected[0] = 1
    np.testing.assert_allclose(tx.body[0], expected, atol=1e-15)


def test_modulate_matches_direct_idft_sum():
    cfg = OfdmConfig(n_subcarriers=32, cp_len=8, n_symbols=3)
    data = generate_data(cfg, 3)
    n = np.arange(32)
    # x_m(k) = 1/N sum_n s_m(n) exp(j 2 pi n k / N), evaluated term by term
    direct = np.array([[np.sum(s * np.exp(2j * np.pi * n * k / 32)) / 32 for k in range(32)]
                       for s in data.symbols])
    tx = modulate(data, cfg)
    np.testing.assert_allclose(tx.body, direct, atol=1e-14)
    np.testing.assert_allclose(tx.samples[:, :8], direct[:, 24:], atol=1e-14)


def test_circular_shift_property(rng):
    cfg = OfdmConfig(n_subcarriers=64, cp_len=16)
    data = generate_data(cfg, 11)
    x = modulate(data, cfg).body[0]
    n = np.arange(64)
    for l in rng.integers(0, 64, size=5):
        shifted = x[(np.arange(64) - l) % 64]
        # direct DFT of the shifted symbol
        dft = np.array([np.sum(shifted * np.exp(-2j * np.pi * k * n / 64)) for k in range(64)])
        np.testing.assert_allclose(dft, data.symbols[0] * np.exp(-2j * np.pi * l * n / 64),
                                   atol=1e-12)


def test_modulate_dimension_mismatch(cfg):
    with pytest.raises(ValueError):
        modulate(DataGrid(np.ones((2, 1024))), cfg)


@settings(max_examples=100, deadline=None)
@given(small_configs(), st.integers(0, 2**32))
def test_round_trip_and_cp(config, seed):
    data = generate_data(config, seed)
    tx = modulate(data, config)
    n, q = config.n_subcarriers, config.cp_len
    assert tx.samples.shape == (config.n_symbols, n + q)
    assert np.max(np.abs(demodulate(tx) - data.symbols)) < 1e-12
    # CP copies the tail bit-exactly
    np.testing.assert_array_equal(tx.samples[:, :q], tx.samples[:, n:n + q])


@settings(max_examples=100, deadline=None)
@given(small_configs(), st.integers(0, 2**32))
def test_parseval(config, seed):
    data = generate_data(config, seed)
    x = modulate(data, config).body
    n = config.n_subcarriers
    assert np.mean(np.abs(x) ** 2) == pytest.approx(np.mean(np.abs(data.symbols) ** 2) / n,
                                                    rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(small_configs(), st.integers(0, 2**63 - 1))
def test_determinism(config, seed):
    a, b = generate_data(config, seed), generate_data(config, seed)
    assert a.symbols.tobytes() == b.symbols.tobytes()
    assert modulate(a, config).samples.tobytes() == modulate(b, config).samples.tobytes()
