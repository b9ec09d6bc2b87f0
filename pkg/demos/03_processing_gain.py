# coding: utf-8

# # Processing gain of FOS and DFOS
#
# With a single symbol the FOS range FFT integrates N = 1024 samples, a gain
# of 30.10 dB.  DFOS integrates only Q - P + 1 decimated samples, but the
# decimator already removed (D - 1)/D of the noise, so the gain is nearly the
# same.  We also sweep the number of taps per branch.

# %%

from ofdm_sensing.experiment import ExperimentConfig, run_snr_sweep, run_sweep_p

exp = ExperimentConfig(trials=2000, seed=3)
for row in run_snr_sweep(exp):
    print(f"gamma {row['gamma_db']:6.1f} dB   FOS {row['fos_snr_db']:6.2f} dB   "
          f"DFOS {row['dfos_snr_db']:6.2f} dB")

# %%

# Few taps let noise alias into the band; many taps leave fewer valid
# outputs to integrate.  The curve rises, flattens and falls again.

rows = run_sweep_p(exp, gamma_db=0.0)
for row in rows:
    bar = "#" * int(max(0.0, row["mean_snr_db"] - 27.0) * 20)
    print(f"P = {row['P']:2d}  {row['mean_snr_db']:6.2f} dB  {bar}")
