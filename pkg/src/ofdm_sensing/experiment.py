"""Experiment configuration and the studies run by the command line tool.

Every study is a pure function of an :class:`ExperimentConfig`.  Monte-Carlo
trials are processed in fixed-size chunks whose seeds are spawned from the
config seed, so results do not depend on how many worker processes run them.
"""
from __future__ import annotations

import dataclasses
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .channel import EchoFrame, Target, add_awgn, delay_samples, synthesize_echo
from .decimator import decimate_grid, decimate_row, design_filter
from .dfos import dfos_rdm, estimate_dfos
from .fos import (WINDOWS, ambiguity_limits, estimate_fos, fos_rdm, make_window,
                  two_dim_dft)
from .metrics import (NoiselessRdmError, complexity_model, fft_stage_times, split_snr,
                      time_median)
from .preproc import EchoGrid, inject_grid_noise, preprocess
from .waveform import OfdmConfig, generate_data, modulate

NOISE_MODES = ("time", "grid", "none")
CHUNK_TRIALS = 500


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass
class ExperimentConfig:
    """Flat, JSON-serialisable description of one experiment.

    Physical quantities are SI with the unit in the key name.  Defaults
    reproduce the 24 GHz, N=1024, T=11 us, Q=128 QPSK system.
    """

    n_subcarriers: int = 1024
    cp_len: int = 128
    symbol_duration_s: float = 11e-6
    carrier_freq_hz: float = 24e9
    n_symbols: int = 1
    targets: list = field(default_factory=lambda: [
        {"range_m": 56.0, "velocity_mps": -10.0, "alpha_re": 1.0, "alpha_im": 0.0}])
    taps_per_branch: int = 16
    window_range: str = "rectangular"
    window_doppler: str = "rectangular"
    noise_mode: str = "grid"
    snr_db: float = -10.0
    trials: int = 1000
    seed: int = 0
    out_dir: str = "out"
    n_peaks: int = 1
    p_list: list = field(default_factory=lambda: [1, 2, 4, 8, 16, 24, 32, 40, 48])
    gamma_list_db: list = field(default_factory=lambda: [-30.0, -20.0, -10.0, 0.0])
    range_dist_m: list = field(default_factory=lambda: [0.0, 200.0])
    velocity_dist_mps: list = field(default_factory=lambda: [-110.0, 110.0])
    cut_velocity_mps: float = -10.0
    cut_range_m: float = 56.0
    bench_repeats: int = 20

    @property
    def ofdm(self) -> OfdmConfig:
        return OfdmConfig(self.n_subcarriers, self.cp_len, self.symbol_duration_s,
                          self.carrier_freq_hz, self.n_symbols)

    def target_list(self) -> list[Target]:
        return [Target(t["range_m"], t.get("velocity_mps", 0.0),
                       complex(t.get("alpha_re", 1.0), t.get("alpha_im", 0.0)))
                for t in self.targets]

    def validate(self) -> "ExperimentConfig":
        try:
            cfg = self.ofdm
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        for key in ("window_range", "window_doppler"):
            if getattr(self, key) not in WINDOWS:
                raise ConfigError(f"{key}: unknown window {getattr(self, key)!r}")
        if self.noise_mode not in NOISE_MODES:
            raise ConfigError(f"noise_mode must be one of {NOISE_MODES}")
        for p in [self.taps_per_branch, *self.p_list]:
            if not isinstance(p, int) or p < 1 or p * cfg.decimation > cfg.n_subcarriers:
                raise ConfigError(f"taps per branch {p} invalid: need 1 <= P <= Q")
        if self.trials < 1 or self.n_peaks < 1:
            raise ConfigError("trials and n_peaks must be >= 1")
        for i, t in enumerate(self.targets):
            extra = set(t) - {"range_m", "velocity_mps", "alpha_re", "alpha_im"}
            if extra or "range_m" not in t:
                raise ConfigError(f"targets[{i}]: expected keys range_m, velocity_mps, "
                                  f"alpha_re, alpha_im")
            try:
                delay_samples(t["range_m"], cfg)
            except ValueError as exc:
                raise ConfigError(f"targets[{i}]: {exc}") from None
        lo, hi = self.range_dist_m
        if not 0 <= lo <= hi or delay_samples(hi, cfg, strict=False) > cfg.cp_len:
            raise ConfigError("range_dist_m must lie within [0, max unambiguous range]")
        return self

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, raw: dict, source: str = "") -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        for key in raw:
            if key not in known:
                raise ConfigError(f"{_where(source, key)}unknown key {key!r}")
        try:
            return cls(**raw).validate()
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"line {exc.lineno}: {exc.msg}") from None
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(raw, text)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        return cls.from_json(Path(path).read_text())


def _where(source: str, key: str) -> str:
    for lineno, line in enumerate(source.splitlines(), 1):
        if f'"{key}"' in line:
            return f"line {lineno}: "
    return ""


def three_target_config(**overrides) -> ExperimentConfig:
    """Three targets at 50/56/56 m and -10/-10/0 m/s, M=256, Hamming windows."""
    base = dict(
        n_symbols=256,
        targets=[
            {"range_m": 50.0, "velocity_mps": -10.0, "alpha_re": 1.0, "alpha_im": 0.0},
            {"range_m": 56.0, "velocity_mps": -10.0, "alpha_re": 1.0, "alpha_im": 0.0},
            {"range_m": 56.0, "velocity_mps": 0.0, "alpha_re": 1.0, "alpha_im": 0.0},
        ],
        window_range="hamming",
        window_doppler="hamming",
        noise_mode="time",
        snr_db=20.0,
        n_peaks=3,
    )
    base.update(overrides)
    return ExperimentConfig(**base).validate()


# ---------------------------------------------------------------------------
# single run


def simulate_grid(cfg: OfdmConfig, targets, seed, noise_mode="none", snr_db=math.inf):
    """Full chain: data -> CP-OFDM -> echo (+noise) -> pre-processed grid."""
    rng = np.random.default_rng(seed)
    data_seed, noise_seed = rng.integers(2**63, size=2)
    data = generate_data(cfg, data_seed)
    rx = synthesize_echo(modulate(data, cfg), targets, cfg)
    if noise_mode == "time":
        rx = add_awgn(rx, snr_db, noise_seed)
    grid = preprocess(rx, data, cfg)
    if noise_mode == "grid":
        grid = inject_grid_noise(grid, snr_db, noise_seed)
    return grid


def run_detect(exp: ExperimentConfig) -> dict:
    """FOS and DFOS on one simulated frame; returns RDMs, detections and cuts."""
    cfg = exp.ofdm
    grid = simulate_grid(cfg, exp.target_list(), exp.seed, exp.noise_mode, exp.snr_db)
    spec = design_filter(exp.taps_per_branch, cfg)
    rdm_f = fos_rdm(grid, cfg, exp.window_range, exp.window_doppler)
    rdm_d = dfos_rdm(decimate_grid(grid, spec), cfg, exp.window_range, exp.window_doppler)
    m, n, q = cfg.n_symbols, cfg.n_subcarriers, cfg.cp_len
    b_cut = int(round(exp.cut_velocity_mps * 2 * m * cfg.carrier_freq
                      * cfg.cp_symbol_duration / cfg.c)) % m
    k_r = delay_samples(exp.cut_range_m, cfg)
    return {
        "grid": grid,
        "rdm": {"fos": rdm_f, "dfos": rdm_d},
        "detections": {
            "fos": estimate_fos(rdm_f, cfg, exp.n_peaks),
            "dfos": estimate_dfos(rdm_d, cfg, exp.n_peaks),
        },
        "cut_doppler_bin": b_cut,
        "cut_range_bins": {"fos": (n - k_r) % n, "dfos": (-k_r - q // 2) % q},
        "limits": ambiguity_limits(cfg),
    }


# ---------------------------------------------------------------------------
# Monte-Carlo SNR studies


def _mc_chunk(exp: ExperimentConfig, seed_seq: np.random.SeedSequence, n_trials: int,
              p_list, gamma_list, with_fos: bool):
    """One chunk of random-target trials.

    Returns (fos, dfos): RDM SNR in dB with shapes (n_gamma, n_trials) and
    (n_p, n_gamma, n_trials).  The RDM of signal+noise is split into its two
    linear parts so peak power and noise floor are measured without bias.
    All P values share the same targets, data and noise draws.
    """
    cfg = exp.ofdm
    rng = np.random.default_rng(seed_seq)
    ranges = rng.uniform(*exp.range_dist_m, n_trials)
    vels = rng.uniform(*exp.velocity_dist_mps, n_trials)
    seeds = rng.integers(2**63, size=(n_trials, 2))
    noise_seeds = rng.integers(2**63, size=len(gamma_list))

    sig = np.empty((n_trials, cfg.n_symbols, cfg.n_subcarriers), dtype=np.complex128)
    frames = []
    for i in range(n_trials):
        data = generate_data(cfg, seeds[i, 0])
        rx = synthesize_echo(modulate(data, cfg), [Target(ranges[i], vels[i])], cfg)
        sig[i] = preprocess(rx, data, cfg).values
        frames.append((data, rx))

    noises = []
    for g, ns in zip(gamma_list, noise_seeds):
        if exp.noise_mode == "grid":
            noise = inject_grid_noise(EchoGrid(np.zeros_like(sig)), g, ns).values
        elif exp.noise_mode == "time":
            noise = np.empty_like(sig)
            child = np.random.SeedSequence(int(ns)).spawn(n_trials)
            for i, (data, rx) in enumerate(frames):
                nz = add_awgn(rx, g, child[i]).samples - rx.samples
                noise[i] = preprocess(EchoFrame(nz), data, cfg).values
        else:
            noise = np.zeros_like(sig)
        noises.append(noise)

    w_m = make_window(exp.window_doppler, cfg.n_symbols)
    fos = np.empty((len(gamma_list), n_trials))
    if with_fos:
        w_n = make_window(exp.window_range, cfg.n_subcarriers)
        s_rdm = two_dim_dft(sig, w_n, w_m, cfg.n_subcarriers)
        for j, noise in enumerate(noises):
            fos[j] = split_snr(s_rdm, two_dim_dft(noise, w_n, w_m, cfg.n_subcarriers))

    dfos = np.empty((len(p_list), len(gamma_list), n_trials))
    for i, p in enumerate(p_list):
        spec = design_filter(p, cfg)
        w_r = make_window(exp.window_range, spec.n_out)
        s_rdm = two_dim_dft(decimate_row(sig, spec), w_r, w_m, cfg.cp_len)
        for j, noise in enumerate(noises):
            n_rdm = two_dim_dft(decimate_row(noise, spec), w_r, w_m, cfg.cp_len)
            dfos[i, j] = split_snr(s_rdm, n_rdm)
    return fos, dfos


def _monte_carlo(exp: ExperimentConfig, p_list, gamma_list, with_fos: bool,
                 parallel: int = 1):
    if any(math.isinf(g) and g > 0 for g in gamma_list) or exp.noise_mode == "none":
        raise NoiselessRdmError("SNR sweeps need noise; got an infinite SNR")
    sizes = [CHUNK_TRIALS] * (exp.trials // CHUNK_TRIALS)
    if exp.trials % CHUNK_TRIALS:
        sizes.append(exp.trials % CHUNK_TRIALS)
    seqs = np.random.SeedSequence(exp.seed).spawn(len(sizes))
    args = [(exp, s, n, list(p_list), list(gamma_list), with_fos) for s, n in zip(seqs, sizes)]
    if parallel > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            parts = list(pool.map(_mc_star, args))
    else:
        parts = [_mc_chunk(*a) for a in args]
    fos = np.concatenate([p[0] for p in parts], axis=-1)
    dfos = np.concatenate([p[1] for p in parts], axis=-1)
    return fos, dfos


def _mc_star(args):
    return _mc_chunk(*args)


def run_sweep_p(exp: ExperimentConfig, p_list=None, gamma_db=None, parallel: int = 1):
    """Mean/std DFOS-RDM SNR versus taps per branch at one grid SNR."""
    p_list = list(exp.p_list if p_list is None else p_list)
    gamma = exp.snr_db if gamma_db is None else gamma_db
    _, dfos = _monte_carlo(exp, p_list, [gamma], with_fos=False, parallel=parallel)
    return [
        {"P": p, "gamma_db": gamma, "mean_snr_db": float(dfos[i, 0].mean()),
         "std_snr_db": float(dfos[i, 0].std()), "trials": exp.trials}
        for i, p in enumerate(p_list)
    ]


def run_snr_sweep(exp: ExperimentConfig, gamma_list=None, parallel: int = 1):
    """Mean FOS and DFOS RDM SNR versus the SNR of the pre-processed echo."""
    gamma_list = list(exp.gamma_list_db if gamma_list is None else gamma_list)
    fos, dfos = _monte_carlo(exp, [exp.taps_per_branch], gamma_list, with_fos=True,
                             parallel=parallel)
    return [
        {"gamma_db": g, "fos_snr_db": float(fos[j].mean()),
         "dfos_snr_db": float(dfos[0, j].mean())}
        for j, g in enumerate(gamma_list)
    ]


# ---------------------------------------------------------------------------
# benchmark


def run_bench(exp: ExperimentConfig) -> dict:
    """Analytic operation counts plus median wall-clock times of each stage."""
    cfg = exp.ofdm
    p = exp.taps_per_branch
    reps = exp.bench_repeats
    report = complexity_model(cfg, p)
    grid = simulate_grid(cfg, exp.target_list(), exp.seed)
    spec = design_filter(p, cfg)
    times = fft_stage_times(cfg, p, reps, exp.seed)
    times["decimation_fft_s"] = time_median(lambda: decimate_row(grid.values, spec, "fft"), reps)
    times["decimation_direct_s"] = time_median(
        lambda: decimate_row(grid.values, spec, "direct"), reps)
    times["fos_pipeline_s"] = time_median(
        lambda: fos_rdm(grid, cfg, exp.window_range, exp.window_doppler), reps)
    times["dfos_pipeline_s"] = time_median(
        lambda: dfos_rdm(decimate_grid(grid, spec), cfg, exp.window_range,
                         exp.window_doppler), reps)
    times["dfos_pipeline_direct_s"] = time_median(
        lambda: dfos_rdm(decimate_grid(grid, spec, "direct"), cfg, exp.window_range,
                         exp.window_doppler), reps)
    return {"complexity": report, "times": times}
