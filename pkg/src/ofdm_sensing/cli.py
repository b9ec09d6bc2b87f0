"""``ofdm-sense`` command line: detect, sweep-p, snr-sweep, bench, rdm.

Exit codes: 0 success, 2 configuration error, 3 runtime error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .decimator import design_filter, save_taps_csv
from .experiment import (ConfigError, ExperimentConfig, run_bench, run_detect,
                         run_snr_sweep, run_sweep_p)
from .fos import save_rdm_csv
from .preproc import save_grid

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3


def _fmt(x) -> str:
    if isinstance(x, (str, bool, int, np.integer)):
        return str(x)
    return f"{float(x):.9g}"


def write_csv(path, header, rows) -> None:
    """Header row mandatory, 9 significant digits, LF line endings."""
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _methods(arg: str) -> list[str]:
    return ["fos", "dfos"] if arg == "both" else [arg]


def cmd_detect(exp: ExperimentConfig, out: Path, method: str) -> None:
    res = run_detect(exp)
    rows = []
    for meth in _methods(method):
        for i, det in enumerate(res["detections"][meth]):
            rows.append((meth, i, det.range_bin, det.doppler_bin, det.range_m,
                         det.velocity_mps, det.peak_db))
        rdm = res["rdm"][meth]
        save_rdm_csv(rdm, out / f"rdm_{meth}.csv")
        mag_db = 20 * np.log10(rdm.magnitude + 1e-300)
        b = res["cut_doppler_bin"]
        k = res["cut_range_bins"][meth]
        write_csv(out / f"range_cut_{meth}.csv", ["range_bin", "r_m", "mag_db"],
                  [(i, r, v) for i, (r, v) in enumerate(zip(rdm.range_axis_m, mag_db[b]))])
        write_csv(out / f"velocity_cut_{meth}.csv", ["doppler_bin", "v_mps", "mag_db"],
                  [(i, v, x) for i, (v, x) in enumerate(zip(rdm.velocity_axis_mps,
                                                           mag_db[:, k]))])
    write_csv(out / "detections.csv", ["method", "peak_idx", "range_bin", "doppler_bin",
                                       "r_hat_m", "v_hat_mps", "peak_db"], rows)
    for r in rows:
        print(f"{r[0]:>4} #{r[1]}: r = {r[4]:8.3f} m, v = {r[5]:8.3f} m/s, {r[6]:7.2f} dB")


def cmd_rdm(exp: ExperimentConfig, out: Path, method: str, dump_grid: bool) -> None:
    res = run_detect(exp)
    for meth in _methods(method):
        save_rdm_csv(res["rdm"][meth], out / f"rdm_{meth}.csv")
    if dump_grid:
        save_grid(res["grid"], out / "echo_grid.csv")
        save_taps_csv(design_filter(exp.taps_per_branch, exp.ofdm), out / "taps.csv")


def cmd_sweep_p(exp: ExperimentConfig, out: Path, parallel: int) -> None:
    rows = run_sweep_p(exp, parallel=parallel)
    keys = ["P", "gamma_db", "mean_snr_db", "std_snr_db", "trials"]
    write_csv(out / "sweep_p.csv", keys, [[r[k] for k in keys] for r in rows])
    for r in rows:
        print(f"P={r['P']:3d}  mean {r['mean_snr_db']:7.3f} dB  std {r['std_snr_db']:.3f}")


def cmd_snr_sweep(exp: ExperimentConfig, out: Path, parallel: int) -> None:
    rows = run_snr_sweep(exp, parallel=parallel)
    keys = ["gamma_db", "fos_snr_db", "dfos_snr_db"]
    write_csv(out / "snr_sweep.csv", keys, [[r[k] for k in keys] for r in rows])
    for r in rows:
        print(f"gamma {r['gamma_db']:6.1f} dB: FOS {r['fos_snr_db']:7.3f} dB, "
              f"DFOS {r['dfos_snr_db']:7.3f} dB")


def cmd_bench(exp: ExperimentConfig, out: Path) -> None:
    res = run_bench(exp)
    counts = res["complexity"].as_dict()
    write_csv(out / "complexity.csv", ["quantity", "value"], counts.items())
    write_csv(out / "timings.csv", ["stage", "median_s"], res["times"].items())
    print("operation counts (x log2 x per x-point FFT)")
    for k, v in counts.items():
        print(f"  {k:34s} {v:>14,}" if isinstance(v, int) else f"  {k:34s} {v:14.3f}")
    print(f"wall clock, median of {exp.bench_repeats} runs")
    for k, v in res["times"].items():
        print(f"  {k:34s} {v * 1e3:11.3f} ms")
    t = res["times"]
    print(f"  DFOS/FOS 2-D FFT stage ratio        {t['dfos_fft_stage_s'] / t['fos_fft_stage_s']:.3f}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON experiment config")
    common.add_argument("--seed", type=int, help="override the config seed")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--method", choices=["fos", "dfos", "both"], default="both")
    common.add_argument("--trials", type=int, help="Monte-Carlo trials")
    common.add_argument("--parallel", type=int, default=1, help="worker processes")

    parser = argparse.ArgumentParser(prog="ofdm-sense", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("detect", parents=[common], help="FOS and DFOS detection on one frame")
    sub.add_parser("sweep-p", parents=[common], help="DFOS-RDM SNR versus taps per branch")
    sub.add_parser("snr-sweep", parents=[common], help="FOS/DFOS RDM SNR versus echo SNR")
    sub.add_parser("bench", parents=[common], help="operation counts and stage timings")
    p_rdm = sub.add_parser("rdm", parents=[common], help="dump a single RDM")
    p_rdm.add_argument("--dump-grid", action="store_true",
                       help="also write the pre-processed echo grid and filter taps")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        exp = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
        if args.seed is not None:
            exp.seed = args.seed
        if args.trials is not None:
            exp.trials = args.trials
        if args.out is not None:
            exp.out_dir = str(args.out)
        exp.validate()
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out = Path(exp.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "config.json").write_text(exp.to_json())
        if args.command == "detect":
            cmd_detect(exp, out, args.method)
        elif args.command == "rdm":
            cmd_rdm(exp, out, args.method, args.dump_grid)
        elif args.command == "sweep-p":
            cmd_sweep_p(exp, out, args.parallel)
        elif args.command == "snr-sweep":
            cmd_snr_sweep(exp, out, args.parallel)
        elif args.command == "bench":
            cmd_bench(exp, out)
    except Exception as exc:  # noqa: BLE001 - surfaced as exit code 3
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
