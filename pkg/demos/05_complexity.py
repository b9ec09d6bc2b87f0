# coding: utf-8

# # What decimation buys, and what it costs
#
# The range-Doppler FFT shrinks from M x N to M x Q points.  The decimation
# itself is not free: D forward and D inverse Q~-point FFTs per symbol.
# Counting it once (the cost of one row) gives a ninefold saving; counting
# it for every symbol wipes the saving out at these sizes.

# %%

from ofdm_sensing import OfdmConfig, complexity_model
from ofdm_sensing.experiment import ExperimentConfig, run_bench

cfg = OfdmConfig(n_symbols=256)
for key, value in complexity_model(cfg, 16).as_dict().items():
    print(f"{key:34s} {value:>14,}" if isinstance(value, int) else f"{key:34s} {value:14.3f}")

# %%

# Wall clock, median of 20 runs.  The FFT stage alone follows the counts;
# whole pipelines depend on how the branch filtering is done.

bench = run_bench(ExperimentConfig(n_symbols=256))
for stage, seconds in bench["times"].items():
    print(f"{stage:26s} {seconds * 1e3:9.3f} ms")
