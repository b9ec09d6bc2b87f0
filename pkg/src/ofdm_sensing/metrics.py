"""RDM SNR, operation-count complexity model, mainlobe width and timing."""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass

import numpy as np

from .fos import Rdm, two_dim_dft
from .waveform import OfdmConfig

#: noise-floor exclusion half-widths around the peak (range, Doppler)
DEFAULT_SNR_GUARD = (5, 5)

# above this an RDM is taken to carry no noise at all
_NOISELESS_DB = 200.0


class NoiselessRdmError(ValueError):
    """The RDM noise floor is numerically zero, so its SNR is undefined."""


def guard_mask(shape: tuple[int, int], peak: tuple[int, int], guard) -> np.ndarray:
    """Boolean mask of the bins *outside* a circular guard rectangle."""
    n_dop, n_rng = shape
    b0, k0 = peak
    g_r, g_d = guard
    dk = np.abs((np.arange(n_rng) - k0 + n_rng // 2) % n_rng - n_rng // 2)
    db = np.abs((np.arange(n_dop) - b0 + n_dop // 2) % n_dop - n_dop // 2)
    return ~((db[:, None] <= g_d) & (dk[None, :] <= g_r))


def rdm_snr(rdm: Rdm | np.ndarray, guard_range: int = DEFAULT_SNR_GUARD[0],
            guard_doppler: int = DEFAULT_SNR_GUARD[1], peak=None) -> float:
    """Peak power over mean bin power outside the guard region, in dB.

    ``peak`` (doppler_bin, range_bin) defaults to the argmax of |Y|.
    """
    values = rdm.values if isinstance(rdm, Rdm) else np.asarray(rdm)
    power = np.abs(values) ** 2
    if peak is None:
        peak = np.unravel_index(np.argmax(power), power.shape)
    outside = guard_mask(power.shape, peak, (guard_range, guard_doppler))
    if not outside.any():
        raise ValueError("guard region covers the whole RDM")
    floor = power[outside].mean()
    peak_power = power[peak]
    if floor == 0 or peak_power / floor > 10 ** (_NOISELESS_DB / 10):
        raise NoiselessRdmError("RDM noise floor is numerically zero")
    return float(10 * np.log10(peak_power / floor))


def split_snr(signal_values: np.ndarray, noise_values: np.ndarray,
              guard=DEFAULT_SNR_GUARD) -> np.ndarray:
    """Per-RDM SNR (dB) of ``signal + noise`` from its two linear parts.

    Both inputs are stacks of RDMs, shape (..., M, K).  The peak is located
    on the signal part and its power taken there; the floor is the mean
    noise power outside the guard rectangle.  Unlike ``rdm_snr`` on the sum,
    this is not biased upward at low SNR by noise adding into the peak bin.
    """
    sig = np.abs(np.asarray(signal_values)) ** 2
    noise = np.abs(np.asarray(noise_values)) ** 2
    lead = sig.shape[:-2]
    sig = sig.reshape(-1, *sig.shape[-2:])
    noise = noise.reshape(-1, *noise.shape[-2:])
    out = np.empty(sig.shape[0])
    for i, (s, n) in enumerate(zip(sig, noise)):
        peak = np.unravel_index(np.argmax(s), s.shape)
        floor = n[guard_mask(s.shape, peak, guard)].mean()
        if floor == 0:
            raise NoiselessRdmError("noise part is identically zero")
        out[i] = 10 * np.log10(s[peak] / floor)
    return out.reshape(lead)


def _log2_exact(x: int) -> int:
    if x < 1 or x & (x - 1):
        raise ValueError(f"{x} is not a power of two")
    return x.bit_length() - 1


@dataclass(frozen=True)
class ComplexityReport:
    """Radix-2 FFT operation counts, x*log2(x) per x-point transform.

    ``decimation_ops_once`` counts the D forward and D inverse Q~-point
    FFTs once, the cost of one decimated row; ``_per_frame``
    multiplies by M because every symbol is decimated.  ``direct_..``
    counts complex MACs for time-domain branch filtering of a frame.
    """

    fos_rdm_ops: int
    dfos_rdm_ops: int
    decimation_ops_once: int
    decimation_ops_per_frame: int
    direct_decimation_macs_per_frame: int
    ratio_single_decimation: float
    ratio_per_frame_decimation: float
    ratio_direct_decimation: float

    def as_dict(self) -> dict:
        return asdict(self)


def complexity_model(config: OfdmConfig, taps_per_branch: int) -> ComplexityReport:
    m, n, q, d = config.n_symbols, config.n_subcarriers, config.cp_len, config.decimation
    p = taps_per_branch
    fft_size = 1 << (p + q - 2).bit_length()  # next power of two >= P+Q-1
    fos = m * n * _log2_exact(m * n)
    dfos = m * q * _log2_exact(m * q)
    dec_once = 2 * d * fft_size * _log2_exact(fft_size)
    dec_frame = m * dec_once
    direct = m * (q - p + 1) * p * d
    return ComplexityReport(
        fos_rdm_ops=fos,
        dfos_rdm_ops=dfos,
        decimation_ops_once=dec_once,
        decimation_ops_per_frame=dec_frame,
        direct_decimation_macs_per_frame=direct,
        ratio_single_decimation=fos / (dfos + dec_once),
        ratio_per_frame_decimation=fos / (dfos + dec_frame),
        ratio_direct_decimation=fos / (dfos + direct),
    )


def _crossing(cut: np.ndarray, start: int, step: int, level: float) -> float:
    """Fractional bin offset from ``start`` where ``cut`` first drops below ``level``."""
    n = cut.size
    prev = cut[start % n]
    for i in range(1, n):
        cur = cut[(start + step * i) % n]
        if cur < level:
            return i - 1 + (prev - level) / (prev - cur)
        prev = cur
    raise ValueError("no -3 dB crossing found in cut")


def mainlobe_width(cut_db, peak_bin: int, axis_scale: float) -> float:
    """-3 dB width of the lobe around ``peak_bin`` (cut is taken as circular).

    Crossings are linearly interpolated between bins; the result is in the
    units of ``axis_scale`` per bin.
    """
    cut = np.asarray(cut_db, dtype=float)
    level = cut[peak_bin] - 3.0
    left = _crossing(cut, peak_bin, -1, level)
    right = _crossing(cut, peak_bin, +1, level)
    return (left + right) * axis_scale


def range_cut_db(values, win_range: np.ndarray, win_doppler: np.ndarray,
                 doppler_bin: int, n_fft: int) -> np.ndarray:
    """20 log10 |Y| along range at one Doppler bin, range FFT zero-padded to ``n_fft``.

    ``values`` is the M x K (pre-processed or decimated) echo; a larger
    ``n_fft`` interpolates the cut without changing the windowing.
    """
    values = np.asarray(values)
    m = values.shape[0]
    steer = np.exp(-2j * np.pi * doppler_bin * np.arange(m) / m) * win_doppler
    row = steer @ values
    spec = np.fft.fft(row * win_range, n=n_fft)
    return 20 * np.log10(np.maximum(np.abs(spec), np.finfo(float).tiny))


def time_median(fn, repeats: int = 20, warmup: int = 2) -> float:
    """Median wall-clock seconds of ``fn()`` over ``repeats`` calls."""
    for _ in range(warmup):
        fn()
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return float(np.median(times))


def fft_stage_times(config: OfdmConfig, taps_per_branch: int, repeats: int = 20,
                    seed: int = 0) -> dict:
    """Median times of the FOS and DFOS 2-D FFT stages on random data."""
    rng = np.random.default_rng(seed)
    m, n, q = config.n_symbols, config.n_subcarriers, config.cp_len
    n_valid = q - taps_per_branch + 1
    y = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    yd = np.ascontiguousarray(y[:, :n_valid])
    ones_n, ones_v, ones_m = np.ones(n), np.ones(n_valid), np.ones(m)
    return {
        "fos_fft_stage_s": time_median(lambda: two_dim_dft(y, ones_n, ones_m, n), repeats),
        "dfos_fft_stage_s": time_median(lambda: two_dim_dft(yd, ones_v, ones_m, q), repeats),
    }
