"""CP-OFDM transmitter: system constants, QPSK data and symbol synthesis.

DFT convention used everywhere in the package: the inverse transform
carries the 1/N factor, the forward transform carries none.  With unit
modulus data a noiseless single target therefore yields an RDM peak of
exactly M*N*|alpha| under rectangular windows.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

SPEED_OF_LIGHT = 3.0e8

QPSK_ALPHABET = np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]) / np.sqrt(2)


def _is_pow2(x: int) -> bool:
    return x > 0 and (x & (x - 1)) == 0


def frozen(arr) -> np.ndarray:
    """Complex read-only copy, used for all grids held by dataclasses."""
    out = np.array(arr, dtype=np.complex128)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class OfdmConfig:
    """System constants of the sensing OFDM link.

    Defaults are the 24 GHz automotive parameter set: N=1024 sub-carriers,
    T=11 us, Q=128 CP samples, a single symbol.
    """

    n_subcarriers: int = 1024
    cp_len: int = 128
    symbol_duration: float = 11e-6
    carrier_freq: float = 24e9
    n_symbols: int = 1
    c: float = SPEED_OF_LIGHT

    def __post_init__(self):
        n, q = self.n_subcarriers, self.cp_len
        if not (_is_pow2(n) and _is_pow2(q)):
            raise ValueError(f"N={n} and Q={q} must both be powers of two")
        if q >= n:
            raise ValueError(f"CP length Q={q} must be smaller than N={n}")
        if self.n_symbols < 1:
            raise ValueError("n_symbols must be >= 1")
        if self.symbol_duration <= 0 or self.carrier_freq <= 0 or self.c <= 0:
            raise ValueError("durations, frequencies and c must be positive")

    @property
    def sample_time(self) -> float:
        return self.symbol_duration / self.n_subcarriers

    @property
    def bandwidth(self) -> float:
        return self.n_subcarriers / self.symbol_duration

    @property
    def cp_symbol_duration(self) -> float:
        """Duration of one CP-OFDM symbol, T + Q*T_s."""
        return self.symbol_duration + self.cp_len * self.sample_time

    @property
    def decimation(self) -> int:
        return self.n_subcarriers // self.cp_len

    @property
    def wavelength(self) -> float:
        return self.c / self.carrier_freq

    @property
    def range_per_sample(self) -> float:
        """Round-trip range spanned by one sample delay, c*T_s/2."""
        return self.c * self.sample_time / 2

    def replace(self, **changes) -> "OfdmConfig":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class DataGrid:
    """M x N communication symbols s_m(n)."""

    symbols: np.ndarray
    modulation: str = "QPSK"

    def __post_init__(self):
        object.__setattr__(self, "symbols", frozen(self.symbols))

    @property
    def shape(self) -> tuple[int, int]:
        return self.symbols.shape


@dataclass(frozen=True)
class TxFrame:
    """M x (N+Q) CP-OFDM samples; `body` holds the CP-free x_m(k)."""

    samples: np.ndarray
    cp_len: int = field(default=0)

    def __post_init__(self):
        object.__setattr__(self, "samples", frozen(self.samples))

    @property
    def body(self) -> np.ndarray:
        return self.samples[:, self.cp_len:]


def _check_shape(arr: np.ndarray, shape: tuple[int, int], what: str):
    if arr.shape != shape:
        raise ValueError(f"{what} has shape {arr.shape}, expected {shape}")


def generate_data(config: OfdmConfig, seed: int | np.random.Generator) -> DataGrid:
    """Draw an M x N grid of i.i.d. uniform QPSK symbols."""
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, 4, size=(config.n_symbols, config.n_subcarriers))
    return DataGrid(QPSK_ALPHABET[idx])


def modulate(data: DataGrid, config: OfdmConfig) -> TxFrame:
    n, q = config.n_subcarriers, config.cp_len
    _check_shape(data.symbols, (config.n_symbols, n), "data grid")
    # numpy's ifft already applies 1/N
    body = np.fft.ifft(data.symbols, axis=1)
    samples = np.concatenate([body[:, n - q:], body], axis=1)
    return TxFrame(samples, cp_len=q)


def demodulate(tx: TxFrame) -> np.ndarray:
    """Strip the CP and take the unscaled N-point DFT of each symbol."""
    return np.fft.fft(tx.body, axis=1)
