"""Decimation-based FOS: range-Doppler map over the decimated echo."""
from __future__ import annotations

import numpy as np

from .decimator import DecimatedGrid
from .fos import (DEFAULT_PEAK_GUARD, Detection, Rdm, _as_window, detections_from_rdm,
                  doppler_axis, two_dim_dft)
from .waveform import OfdmConfig


def recover_kr(k_hat: int, cp_len: int) -> int:
    """Delay (samples) whose shifted tone peaks at decimated range bin ``k_hat``.

    The decimated tone sits at bin (-k_r - Q/2) mod Q, so bins [0, Q/2] map
    to Q/2 - k_hat and bins [Q/2+1, Q-1] to 3Q/2 - k_hat.
    """
    k_hat = int(k_hat)
    half = cp_len // 2
    if 0 <= k_hat <= half:
        return half - k_hat
    if half < k_hat < cp_len:
        return 3 * half - k_hat
    raise ValueError(f"range bin {k_hat} outside [0, {cp_len - 1}]")


def dfos_range(k_hat, config: OfdmConfig) -> np.ndarray:
    k_hat = np.atleast_1d(k_hat)
    return np.array([recover_kr(k, config.cp_len) for k in k_hat]) * config.range_per_sample


def dfos_rdm(dgrid: DecimatedGrid, config: OfdmConfig, win_range="rectangular",
             win_doppler="rectangular") -> Rdm:
    """Windowed 2-D DFT of the decimated echo.

    The Q-P+1 valid samples are windowed over their own length and
    zero-padded to a Q-point range FFT, keeping the Q-bin grid that the
    delay recovery relies on.
    """
    m, n_valid = dgrid.shape
    q = config.cp_len
    if m != config.n_symbols or not 1 <= n_valid <= q:
        raise ValueError(f"decimated grid shape {dgrid.shape} does not match config")
    w_r, tag_r = _as_window(win_range, n_valid)
    w_m, tag_m = _as_window(win_doppler, m)
    values = two_dim_dft(dgrid.values, w_r, w_m, q)
    return Rdm(values, "dfos", dfos_range(np.arange(q), config), doppler_axis(config),
               tag_r, tag_m)


def estimate_dfos(rdm: Rdm, config: OfdmConfig, n_peaks: int = 1,
                  guard=DEFAULT_PEAK_GUARD) -> list[Detection]:
    """Peaks of a DFOS-RDM mapped to range k_r c T_s / 2 and FOS velocity."""
    if rdm.method != "dfos" or rdm.range_bin_count != config.cp_len:
        raise ValueError("estimate_dfos needs a Q-bin DFOS range-Doppler matrix")
    return detections_from_rdm(rdm, config, n_peaks, guard)
