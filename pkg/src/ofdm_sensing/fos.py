"""FFT-based OFDM sensing: windowed 2-D DFT, peak picking, bin-to-physical maps."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .preproc import EchoGrid
from .waveform import OfdmConfig

WINDOWS = ("rectangular", "hamming")

#: greedy peak-suppression half-widths (range bins, Doppler bins)
DEFAULT_PEAK_GUARD = (3, 3)


def make_window(kind: str, length: int) -> np.ndarray:
    """Symmetric window of the requested kind.

    Hamming is the symmetric variant, 0.54 - 0.46 cos(2 pi n / (L - 1)).
    """
    if length < 1:
        raise ValueError(f"window length must be >= 1, got {length}")
    if kind in ("rectangular", "rect", "none"):
        return np.ones(length)
    if kind == "hamming":
        return np.hamming(length)
    raise ValueError(f"unknown window kind {kind!r}; choose from {WINDOWS}")


def _as_window(win, length: int) -> tuple[np.ndarray, str]:
    if isinstance(win, str):
        return make_window(win, length), win
    w = np.asarray(win, dtype=float)
    if w.shape != (length,):
        raise ValueError(f"window has length {w.size}, expected {length}")
    return w, "custom"


def signed_doppler_bin(b: int, n_symbols: int) -> int:
    """Map an FFT bin in [0, M) to b in [-M/2, M/2]; M/2 stays positive."""
    return int(b) if b <= n_symbols / 2 else int(b) - n_symbols


def velocity_of_bin(b_signed, config: OfdmConfig):
    return b_signed * config.c / (
        2 * config.n_symbols * config.carrier_freq * config.cp_symbol_duration
    )


@dataclass(frozen=True)
class Rdm:
    """Complex range-Doppler matrix.

    ``values[b, k]`` is indexed Doppler-bin first, range-bin second (range is
    the fast axis).  The axis arrays give the physical value of every bin.
    """

    values: np.ndarray
    method: str
    range_axis_m: np.ndarray
    velocity_axis_mps: np.ndarray
    window_range: str = "rectangular"
    window_doppler: str = "rectangular"

    @property
    def doppler_bin_count(self) -> int:
        return self.values.shape[0]

    @property
    def range_bin_count(self) -> int:
        return self.values.shape[1]

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)


@dataclass(frozen=True)
class Detection:
    range_bin: int
    doppler_bin: int  # signed, in [-M/2, M/2]
    range_m: float
    velocity_mps: float
    peak_mag: float

    @property
    def peak_db(self) -> float:
        return 20 * np.log10(self.peak_mag)


def two_dim_dft(values, win_range: np.ndarray, win_doppler: np.ndarray, n_range: int):
    """Windowed range DFT (zero-padded to ``n_range``) then Doppler DFT.

    Works on the last two axes (Doppler, range), so stacks of grids can be
    transformed at once.  No normalisation is applied by either pass.
    """
    x = np.asarray(values) * win_range * win_doppler[:, None]
    spec = np.fft.fft(x, n=n_range, axis=-1)
    return np.fft.fft(spec, axis=-2)


def doppler_axis(config: OfdmConfig) -> np.ndarray:
    m = config.n_symbols
    return velocity_of_bin(np.array([signed_doppler_bin(b, m) for b in range(m)]), config)


def fos_range(k, config: OfdmConfig):
    n = config.n_subcarriers
    return ((n - np.asarray(k)) % n) * config.range_per_sample


def fos_rdm(grid: EchoGrid, config: OfdmConfig, win_range="rectangular",
            win_doppler="rectangular") -> Rdm:
    m, n = grid.shape
    if (m, n) != (config.n_symbols, config.n_subcarriers):
        raise ValueError(f"grid shape {(m, n)} does not match config")
    w_n, tag_n = _as_window(win_range, n)
    w_m, tag_m = _as_window(win_doppler, m)
    values = two_dim_dft(grid.values, w_n, w_m, n)
    return Rdm(values, "fos", fos_range(np.arange(n), config), doppler_axis(config),
               tag_n, tag_m)


def find_peaks(mag: np.ndarray, n_peaks: int, guard=DEFAULT_PEAK_GUARD) -> list[tuple[int, int]]:
    """Greedy pick of the ``n_peaks`` largest local maxima of a 2-D map.

    Both axes are treated as circular.  A candidate is dropped when it lies
    within ``guard`` = (range, Doppler) bins of an already accepted peak.
    Returns (doppler_bin, range_bin) index pairs, strongest first.
    """
    if n_peaks < 1:
        raise ValueError("n_peaks must be >= 1")
    mag = np.asarray(mag)
    n_dop, n_rng = mag.shape
    is_max = mag > 0
    for db in (-1, 0, 1):
        for dk in (-1, 0, 1):
            if db or dk:
                is_max &= mag >= np.roll(mag, (db, dk), axis=(0, 1))
    cand_b, cand_k = np.nonzero(is_max)
    order = np.argsort(mag[cand_b, cand_k], kind="stable")[::-1]
    g_r, g_d = guard
    accepted: list[tuple[int, int]] = []
    for i in order:
        b, k = int(cand_b[i]), int(cand_k[i])
        clash = False
        for ab, ak in accepted:
            dk = min((k - ak) % n_rng, (ak - k) % n_rng)
            db = min((b - ab) % n_dop, (ab - b) % n_dop)
            if dk <= g_r and db <= g_d:
                clash = True
                break
        if not clash:
            accepted.append((b, k))
            if len(accepted) == n_peaks:
                return accepted
    raise ValueError(f"requested {n_peaks} peaks, only {len(accepted)} local maxima found")


def detections_from_rdm(rdm: Rdm, config: OfdmConfig, n_peaks: int,
                        guard=DEFAULT_PEAK_GUARD) -> list[Detection]:
    mag = rdm.magnitude
    out = []
    for b, k in find_peaks(mag, n_peaks, guard):
        b_signed = signed_doppler_bin(b, rdm.doppler_bin_count)
        out.append(Detection(
            range_bin=k,
            doppler_bin=b_signed,
            range_m=float(rdm.range_axis_m[k]),
            velocity_mps=float(velocity_of_bin(b_signed, config)),
            peak_mag=float(mag[b, k]),
        ))
    return out


def estimate_fos(rdm: Rdm, config: OfdmConfig, n_peaks: int = 1,
                 guard=DEFAULT_PEAK_GUARD) -> list[Detection]:
    """Range/velocity estimates from the strongest FOS-RDM peaks.

    Range bin k maps to (N - k) c T_s / 2 (bin 0 and bin N are the same
    zero-range cell); signed Doppler bin b to b c / (2 M f_c T~).
    """
    if rdm.method != "fos" or rdm.range_bin_count != config.n_subcarriers:
        raise ValueError("estimate_fos needs an N-bin FOS range-Doppler matrix")
    return detections_from_rdm(rdm, config, n_peaks, guard)


class AmbiguityLimits(NamedTuple):
    max_range: float
    max_velocity: float
    range_resolution: float
    velocity_resolution: float


def ambiguity_limits(config: OfdmConfig) -> AmbiguityLimits:
    """Unambiguous range/velocity and resolutions (shared by FOS and DFOS)."""
    b, lam, t_cp = config.bandwidth, config.wavelength, config.cp_symbol_duration
    return AmbiguityLimits(
        max_range=config.c * config.cp_len / (2 * b),
        max_velocity=lam / (4 * t_cp),
        range_resolution=config.c / (2 * b),
        velocity_resolution=lam / (2 * t_cp * config.n_symbols),
    )


def save_rdm_csv(rdm: Rdm, path) -> None:
    """Dump 20 log10|Y| with physical axes.

    Header row: ``v_mps\\r_m`` then the range (m) of each range bin; every
    following row starts with the velocity (m/s) of its Doppler bin.
    """
    mag_db = 20 * np.log10(np.maximum(rdm.magnitude, np.finfo(float).tiny))
    with open(Path(path), "w", newline="\n") as fh:
        fh.write("v_mps\\r_m," + ",".join(f"{r:.9g}" for r in rdm.range_axis_m) + "\n")
        for v, row in zip(rdm.velocity_axis_mps, mag_db):
            fh.write(f"{v:.9g}," + ",".join(f"{x:.9g}" for x in row) + "\n")
