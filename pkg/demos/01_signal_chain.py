# coding: utf-8

# # From QPSK data to the pre-processed echo
#
# A CP-OFDM frame is built, bounced off one moving target and stripped of
# its data again.  What remains is a clean two-dimensional complex sinusoid
# whose range and Doppler frequencies are the things we want to measure.

# %%

import numpy as np

from ofdm_sensing import OfdmConfig, Target, generate_data, modulate, preprocess, synthesize_echo
from ofdm_sensing.channel import delay_samples, doppler_freq

cfg = OfdmConfig(n_symbols=16)
print(f"T_s = {cfg.sample_time * 1e9:.3f} ns, B = {cfg.bandwidth / 1e6:.2f} MHz, "
      f"T~ = {cfg.cp_symbol_duration * 1e6:.3f} us, D = {cfg.decimation}")

# %%

# Each symbol carries 1024 QPSK points; the IDFT puts them in the time
# domain and the last 128 samples are copied in front as the cyclic prefix.

data = generate_data(cfg, seed=1)
tx = modulate(data, cfg)
print("frame shape", tx.samples.shape)
print("CP equals tail:", np.array_equal(tx.samples[:, :128], tx.samples[:, 1024:]))

# %%

# A target at 56 m receding at 10 m/s.  The round trip delays the echo by an
# integer number of samples and every symbol picks up a Doppler phase step.

target = Target(56.0, -10.0)
print("k_r =", delay_samples(56.0, cfg), "samples, mu =", doppler_freq(-10.0, cfg), "Hz")
rx = synthesize_echo(tx, [target], cfg)

# %%

# Dropping the CP and dividing by the known data leaves
# y_m(n) = exp(-j 2 pi n k_r / N) exp(j 2 pi m T~ mu).

grid = preprocess(rx, data, cfg)
m = np.arange(16)[:, None]
n = np.arange(1024)[None, :]
model = np.exp(-2j * np.pi * n * 35 / 1024) * np.exp(2j * np.pi * m * cfg.cp_symbol_duration
                                                     * doppler_freq(-10.0, cfg))
print("max deviation from the closed form:", np.max(np.abs(grid.values - model)))
