"""Polyphase bandpass decimation of the pre-processed echo.

After data removal a target at delay k_r <= Q leaves a tone at normalised
angular frequency -2 pi k_r / N, i.e. inside [-2 pi / D, 0] with D = N / Q.
Each echo row is filtered by a complex bandpass FIR with that passband,
downsampled by D, trimmed of filter transients and shifted by pi, so that
the delay appears as a tone over Q-point bins.

The filter of length L = P*D is split into D branches of P taps; branch d
sees the samples row[D-1-d + q*D], q = 0..Q-1.  Branch filtering runs either
in the transform domain (Q~-point FFTs, Q~ >= P+Q-1) or directly.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .preproc import EchoGrid
from .waveform import OfdmConfig, frozen


@dataclass(frozen=True)
class DecimatorSpec:
    """Designed anti-aliasing filter and its polyphase decomposition."""

    taps_per_branch: int
    factor: int
    cp_len: int
    prototype: np.ndarray  # real lowpass, length P*D, sums to 1
    taps: np.ndarray  # complex bandpass h(l)
    branch_taps: np.ndarray  # (D, P); row d holds h(d + p*D)
    fft_size: int
    branch_spectra: np.ndarray  # (D, fft_size)

    @property
    def length(self) -> int:
        return self.taps.size

    @property
    def n_in(self) -> int:
        return self.factor * self.cp_len

    @property
    def n_out(self) -> int:
        """Number of valid outputs per row, Q - P + 1."""
        return self.cp_len - self.taps_per_branch + 1


@dataclass(frozen=True)
class DecimatedGrid:
    """M x (Q-P+1) decimated echo."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", frozen(self.values))

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


def lowpass_prototype(length: int, factor: int) -> np.ndarray:
    """Hamming-windowed sinc with cutoff pi/factor, normalised to unit DC gain."""
    centre = (length - 1) / 2
    ideal = np.sinc((np.arange(length) - centre) / factor) / factor
    h = ideal * np.hamming(length)
    return h / h.sum()


def design_filter(taps_per_branch: int, config: OfdmConfig) -> DecimatorSpec:
    p, d, q = taps_per_branch, config.decimation, config.cp_len
    if p < 1:
        raise ValueError(f"taps per branch must be >= 1, got {p}")
    length = p * d
    if length > config.n_subcarriers:
        raise ValueError(f"filter length P*D={length} exceeds N={config.n_subcarriers}")
    h_lp = lowpass_prototype(length, d)
    # move the passband centre from 0 to -pi/D: passband becomes [-2pi/D, 0]
    h = h_lp * np.exp(-1j * np.pi * np.arange(length) / d)
    branches = h.reshape(p, d).T.copy()
    fft_size = 1 << int(np.ceil(np.log2(p + q - 1)))
    spectra = np.fft.fft(branches, n=fft_size, axis=1)
    for a in (h_lp, h, branches, spectra):
        a.setflags(write=False)
    return DecimatorSpec(p, d, q, h_lp, h, branches, fft_size, spectra)


def frequency_response(taps: np.ndarray, omega) -> np.ndarray:
    """H(e^{j omega}) = sum_l h(l) e^{-j omega l}."""
    omega = np.asarray(omega, dtype=float)
    l = np.arange(len(taps))
    return np.exp(-1j * np.multiply.outer(omega, l)) @ taps


def _branch_inputs(row: np.ndarray, spec: DecimatorSpec) -> np.ndarray:
    if row.shape[-1] != spec.n_in:
        raise ValueError(f"row length {row.shape[-1]} != N = {spec.n_in}")
    # x[..., q, j] = row[q*D + j]; branch d takes j = D-1-d
    x = row.reshape(*row.shape[:-1], spec.cp_len, spec.factor)[..., ::-1]
    return np.swapaxes(x, -1, -2)


def _alternate(n: int) -> np.ndarray:
    return np.where(np.arange(n) % 2 == 0, 1.0, -1.0)


def decimate_row(row, spec: DecimatorSpec, method: str = "fft") -> np.ndarray:
    """Decimate one row (or a stack of rows along the last axis) by D.

    ``method="fft"`` filters each branch by Q~-point transform-domain
    convolution; ``method="direct"`` convolves the branches in time.
    Returns the Q-P+1 valid outputs multiplied by (-1)^n.
    """
    row = np.asarray(row, dtype=np.complex128)
    xb = _branch_inputs(row, spec)  # (..., D, Q)
    p = spec.taps_per_branch
    if method == "fft":
        spectra = np.fft.fft(xb, n=spec.fft_size, axis=-1)
        # branch outputs are summed anyway, so sum before the single inverse FFT
        z = np.fft.ifft(np.einsum("...dk,dk->...k", spectra, spec.branch_spectra), axis=-1)
        z = z[..., p - 1: spec.cp_len]
    elif method == "direct":
        win = sliding_window_view(xb, p, axis=-1)  # (..., D, Q-P+1, P)
        z = np.einsum("...dij,dj->...i", win, spec.branch_taps[:, ::-1])
    else:
        raise ValueError(f"unknown decimation method {method!r}")
    return z * _alternate(spec.n_out)


def direct_decimate_row(row, spec: DecimatorSpec) -> np.ndarray:
    """Reference bandpass decimator working at the full rate.

    Linear convolution with h(l), keep every D-th output starting at D-1
    (the phase the polyphase branches realise), drop the P-1 leading
    transients and apply (-1)^n.  Slow; meant for tests and benchmarks.
    """
    row = np.asarray(row, dtype=np.complex128)
    if row.shape[-1] != spec.n_in:
        raise ValueError(f"row length {row.shape[-1]} != N = {spec.n_in}")
    keep = np.arange(spec.length - 1, spec.n_in, spec.factor)
    flat = row.reshape(-1, spec.n_in)
    out = np.empty((flat.shape[0], keep.size), dtype=np.complex128)
    for i, r in enumerate(flat):
        out[i] = np.convolve(r, spec.taps)[keep]
    out *= _alternate(keep.size)
    return out.reshape(*row.shape[:-1], keep.size)


def decimate_grid(grid: EchoGrid, spec: DecimatorSpec, method: str = "fft") -> DecimatedGrid:
    return DecimatedGrid(decimate_row(grid.values, spec, method))


def save_taps_csv(spec: DecimatorSpec, path) -> None:
    with open(Path(path), "w", newline="\n") as fh:
        fh.write("l,re,im\n")
        for l, h in enumerate(spec.taps):
            fh.write(f"{l},{h.real:.9g},{h.imag:.9g}\n")
