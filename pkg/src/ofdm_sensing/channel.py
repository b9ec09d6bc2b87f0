"""Point-target echo synthesis (integer delay, hop-and-stop Doppler) and AWGN."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .waveform import OfdmConfig, TxFrame, frozen


@dataclass(frozen=True)
class Target:
    """Swerling-I point target: range (m), radial velocity (m/s), reflection."""

    range_m: float
    velocity_mps: float = 0.0
    alpha: complex = 1.0

    def __post_init__(self):
        if self.range_m < 0:
            raise ValueError(f"target range must be >= 0, got {self.range_m}")


@dataclass(frozen=True)
class EchoFrame:
    """Received M x (N+Q) baseband samples."""

    samples: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "samples", frozen(self.samples))


def delay_samples(r: float, config: OfdmConfig, strict: bool = True) -> int:
    """Round-trip delay in samples, round(2r / (c T_s)).

    With ``strict`` the delay must fit inside the cyclic prefix.
    """
    if r < 0:
        raise ValueError(f"range must be >= 0, got {r}")
    k = int(np.round(2 * r / (config.c * config.sample_time)))
    if strict and k > config.cp_len:
        raise ValueError(
            f"range {r} m gives delay {k} samples > CP length {config.cp_len}"
        )
    return k


def doppler_freq(v: float, config: OfdmConfig) -> float:
    return 2 * v * config.carrier_freq / config.c


def _single_echo(tx: np.ndarray, target: Target, config: OfdmConfig) -> np.ndarray:
    k_r = delay_samples(target.range_m, config)
    mu = doppler_freq(target.velocity_mps, config)
    m = np.arange(tx.shape[0])
    phase = np.exp(2j * np.pi * m * config.cp_symbol_duration * mu)
    out = np.zeros_like(tx)
    # per-symbol gating: the first k_r samples of every symbol stay zero
    out[:, k_r:] = tx[:, : tx.shape[1] - k_r]
    return target.alpha * phase[:, None] * out


def synthesize_echo(
    tx: TxFrame, targets: Iterable[Target], config: OfdmConfig
) -> EchoFrame:
    shape = (config.n_symbols, config.n_subcarriers + config.cp_len)
    if tx.samples.shape != shape:
        raise ValueError(f"tx frame has shape {tx.samples.shape}, expected {shape}")
    y = np.zeros(shape, dtype=np.complex128)
    for t in targets:
        y += _single_echo(tx.samples, t, config)
    return EchoFrame(y)


def complex_noise(rng: np.random.Generator, shape, variance: float) -> np.ndarray:
    """Circularly-symmetric complex Gaussian samples of the given variance."""
    scale = np.sqrt(variance / 2)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def add_awgn(frame: EchoFrame, snr_db: float, seed) -> EchoFrame:
    """Add white noise at ``snr_db`` relative to the frame's mean sample power.

    ``snr_db=inf`` returns the frame untouched.
    """
    if np.isposinf(snr_db):
        return frame
    power = np.mean(np.abs(frame.samples) ** 2)
    if power == 0:
        raise ValueError("cannot reference noise to an all-zero frame")
    variance = power / 10 ** (snr_db / 10)
    rng = np.random.default_rng(seed)
    return EchoFrame(frame.samples + complex_noise(rng, frame.samples.shape, variance))
