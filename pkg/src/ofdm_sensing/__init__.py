"""OFDM radar sensing with FFT-based (FOS) and decimation-based (DFOS) processing."""
from .channel import EchoFrame, Target, add_awgn, delay_samples, doppler_freq, synthesize_echo
from .decimator import (DecimatedGrid, DecimatorSpec, decimate_grid, decimate_row,
                        design_filter, direct_decimate_row, frequency_response)
from .dfos import dfos_rdm, estimate_dfos, recover_kr
from .fos import (Detection, Rdm, ambiguity_limits, estimate_fos, find_peaks, fos_rdm,
                  make_window)
from .metrics import (ComplexityReport, NoiselessRdmError, complexity_model,
                      mainlobe_width, rdm_snr, split_snr)
from .preproc import EchoGrid, inject_grid_noise, preprocess
from .waveform import DataGrid, OfdmConfig, TxFrame, demodulate, generate_data, modulate

__version__ = "0.1.0"
