"""Command-line front door: train, degrade, restore, score, and sweep.

Exit codes: 0 success, 2 validation error, 3 I/O or file-format error,
4 training divergence.
"""

import argparse
import os
import sys
import time
from pathlib import Path

from .audio_io import decimate, fit_norm, normalize, read_wav, write_wav
from .degrade import DegradeSpec, degrade, match_noise_stats, replacement_count
from .errors import DivergenceError, ModelFormatError, ValidationError
from .experiment import (
    improvement_vs_fraction,
    make_quasi_speech,
    sweep_degradation,
    sweep_n,
    write_records_csv,
)
from .framing import frame, frame_count
from .metrics import sdr
from .neural import TrainConfig, init, load, save, train
from .plots import plot_degradation_sweep, plot_n_sweep
from .resynth import ResynthConfig, correct

# Full-scale training recipe and the scaled-down preset selected by
# --desk-scale. Full scale needs hours of CPU time; desk scale runs on a
# laptop in minutes.
FULL_SCALE = {"rate": 4000, "frame_len": 1000, "hop": 10, "hidden": 2500,
              "epochs": 600}
DESK_SCALE = {"rate": 8000, "frame_len": 128, "hop": 4, "hidden": 320,
              "epochs": 50}

DEFAULT_N_GRID = [1, 2, 5, 10, 20, 50, 100, 200, 500, 1000]
DEFAULT_FRACTIONS = [round(0.05 * i, 2) for i in range(1, 20)]
DEFAULT_SEEDS = [0, 1, 2, 3, 4]


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"{value} must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="speechrestore",
        description="Train a sigmoid autoencoder on clean speech and use it "
        "to restore audio corrupted by random sample replacement.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a model on a clean WAV")
    p.add_argument("clean_wav", help="clean training audio (PCM WAV)")
    p.add_argument("model_out", help="output model file")
    p.add_argument("--rate", type=_positive_int, default=None,
                   help="working sample rate in Hz; the input is decimated "
                   "to this (default: 4000; 8000 with --desk-scale)")
    p.add_argument("--frame-len", type=_positive_int, default=None,
                   help="frame length in samples "
                   "(default: 1000; 128 with --desk-scale)")
    p.add_argument("--hop", type=_positive_int, default=None,
                   help="training hop between frame starts "
                   "(default: 10; 4 with --desk-scale)")
    p.add_argument("--hidden", type=_positive_int, default=None,
                   help="hidden layer width "
                   "(default: 2500; 320 with --desk-scale)")
    p.add_argument("--epochs", type=_positive_int, default=None,
                   help="complete sweeps over the training frames "
                   "(default: 600; 50 with --desk-scale)")
    p.add_argument("--lr", type=float, default=0.05,
                   help="SGD learning rate (default: 0.05)")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for init and shuffling (default: 0)")
    p.add_argument("--no-shuffle", action="store_true",
                   help="visit frames in order instead of shuffling")
    p.add_argument("--desk-scale", action="store_true",
                   help="laptop-sized preset: rate 8000, frame 128, hop 4, "
                   "hidden 320, epochs 50")

    p = sub.add_parser("degrade", help="randomly replace a fraction of samples")
    p.add_argument("in_wav")
    p.add_argument("out_wav")
    p.add_argument("--fraction", type=float, required=True,
                   help="fraction of samples to replace, in [0, 1]")
    p.add_argument("--seed", type=int, default=0,
                   help="replacement seed (default: 0)")

    p = sub.add_parser("restore", help="correct a degraded WAV with a model")
    p.add_argument("degraded_wav")
    p.add_argument("model")
    p.add_argument("out_wav")
    p.add_argument("--n", type=_positive_int, default=100,
                   help="re-synthesis passes per frame (default: 100)")
    p.add_argument("--inner-fraction", type=float, default=0.5,
                   help="per-pass random replacement fraction (default: 0.5)")
    p.add_argument("--hop", type=_positive_int, default=1,
                   help="hop between restoration frames (default: 1)")
    p.add_argument("--seed", type=int, default=0,
                   help="re-synthesis seed (default: 0)")
    p.add_argument("--threads", type=_positive_int, default=None,
                   help="worker threads (default: all cores); the output "
                   "is identical for any thread count")

    p = sub.add_parser("sdr", help="signal-to-distortion ratio of two WAVs")
    p.add_argument("reference_wav")
    p.add_argument("estimate_wav")

    p = sub.add_parser("sweep", help="run an SDR evaluation sweep to CSV")
    p.add_argument("clean_wav", help="clean test audio at the model's rate")
    p.add_argument("model")
    p.add_argument("csv_out", help="output CSV path")
    p.add_argument("--mode", choices=("n", "degradation"), required=True,
                   help="sweep re-synthesis count or degradation level")
    p.add_argument("--fraction", type=float, default=0.10,
                   help="degradation level for n mode (default: 0.10)")
    p.add_argument("--n", type=_positive_int, default=100,
                   help="re-synthesis count for degradation mode "
                   "(default: 100)")
    p.add_argument("--n-grid", type=_positive_int, nargs="+",
                   default=DEFAULT_N_GRID,
                   help="N values for n mode (default: 1..1000)")
    p.add_argument("--fractions", type=float, nargs="+",
                   default=DEFAULT_FRACTIONS,
                   help="degradation levels for degradation mode "
                   "(default: 0.05..0.95 step 0.05)")
    p.add_argument("--seeds", type=int, nargs="+", default=DEFAULT_SEEDS,
                   help="outer seeds (default: 0 1 2 3 4)")
    p.add_argument("--inner-fraction", type=float, default=0.5,
                   help="per-pass random replacement fraction (default: 0.5)")
    p.add_argument("--hop", type=_positive_int, default=1,
                   help="restoration hop (default: 1)")
    p.add_argument("--threads", type=_positive_int, default=None,
                   help="worker threads (default: all cores)")
    p.add_argument("--no-plot", action="store_true",
                   help="skip rendering the figure next to the CSV")
    p.add_argument("--plot-out", default=None,
                   help="figure path (default: CSV path with .png suffix)")

    p = sub.add_parser("synth", help="generate synthetic quasi-speech test audio")
    p.add_argument("out_wav")
    p.add_argument("--seconds", type=float, default=60.0,
                   help="duration (default: 60)")
    p.add_argument("--rate", type=_positive_int, default=8000,
                   help="sample rate in Hz (default: 8000)")
    p.add_argument("--seed", type=int, default=0,
                   help="synthesis seed (default: 0)")

    return parser


def _resolve_train_params(args):
    preset = DESK_SCALE if args.desk_scale else FULL_SCALE
    return {
        key: getattr(args, key) if getattr(args, key) is not None else preset[key]
        for key in ("rate", "frame_len", "hop", "hidden", "epochs")
    }


def cmd_train(args) -> int:
    params = _resolve_train_params(args)
    cfg = TrainConfig(
        epochs=params["epochs"],
        learning_rate=args.lr,
        seed=args.seed,
        shuffle=not args.no_shuffle,
    )
    raw = read_wav(args.clean_wav)
    working = decimate(raw, params["rate"])
    norm = fit_norm(working)
    frames = frame(normalize(working, norm), params["frame_len"], params["hop"])
    print(
        f"training {params['frame_len']}x{params['hidden']}x"
        f"{params['frame_len']} on {len(frames)} frames "
        f"({working.duration_s:.1f} s at {params['rate']} Hz)"
    )
    model = init(params["frame_len"], params["hidden"], args.seed, norm)
    started = time.perf_counter()

    def report(epoch, loss):
        elapsed = time.perf_counter() - started
        print(f"epoch {epoch + 1}/{cfg.epochs}  mse {loss:.6e}  [{elapsed:.0f} s]",
              flush=True)

    train(model, frames, cfg, on_epoch=report)
    save(model, args.model_out)
    print(f"model written to {args.model_out}")
    return 0


def cmd_degrade(args) -> int:
    if not 0.0 <= args.fraction <= 1.0:
        raise ValidationError(f"--fraction {args.fraction} must lie in [0, 1]")
    signal = read_wav(args.in_wav)
    noise_mean, noise_std = match_noise_stats(signal)
    spec = DegradeSpec(args.fraction, noise_mean, noise_std, seed=args.seed)
    out = degrade(signal, spec)
    write_wav(out, args.out_wav)
    count = replacement_count(args.fraction, len(signal))
    print(f"replaced {count} of {len(signal)} samples "
          f"(noise mean={noise_mean:.6f} std={noise_std:.6f})")
    return 0


def cmd_restore(args) -> int:
    cfg = ResynthConfig(
        n_passes=args.n, inner_fraction=args.inner_fraction, seed=args.seed
    )
    threads = args.threads or os.cpu_count() or 1
    degraded = read_wav(args.degraded_wav)
    model = load(args.model)
    started = time.perf_counter()
    restored = correct(model, degraded, cfg, hop=args.hop, threads=threads)
    elapsed = time.perf_counter() - started
    write_wav(restored, args.out_wav)
    n_frames = frame_count(len(degraded), model.frame_len, args.hop)
    print(f"corrected {n_frames} frames in {elapsed:.1f} s "
          f"(N={args.n}, threads={threads})")
    return 0


def cmd_sdr(args) -> int:
    reference = read_wav(args.reference_wav)
    estimate = read_wav(args.estimate_wav)
    print(f"{sdr(reference, estimate).sdr_db:.2f}")
    return 0


def cmd_sweep(args) -> int:
    if not 0.0 <= args.fraction <= 1.0:
        raise ValidationError(f"--fraction {args.fraction} must lie in [0, 1]")
    for fraction in args.fractions:
        if not 0.0 <= fraction <= 1.0:
            raise ValidationError(f"fraction {fraction} must lie in [0, 1]")
    threads = args.threads or os.cpu_count() or 1
    clean = read_wav(args.clean_wav)
    model = load(args.model)
    if args.mode == "n":
        records = sweep_n(
            model, clean, args.fraction, args.n_grid, args.seeds,
            hop=args.hop, threads=threads, inner_fraction=args.inner_fraction,
        )
    else:
        records = sweep_degradation(
            model, clean, args.fractions, args.n, args.seeds,
            hop=args.hop, threads=threads, inner_fraction=args.inner_fraction,
        )
    write_records_csv(records, args.csv_out)
    print(f"{len(records)} records written to {args.csv_out}")
    print("(SDR computed on the frame-covered region with the mean removed)")
    if args.mode == "degradation":
        r = improvement_vs_fraction(records)
        print(f"Pearson r (improvement vs fraction): {r:.4f}")
    if not args.no_plot:
        plot_path = args.plot_out or str(Path(args.csv_out).with_suffix(".png"))
        if args.mode == "n":
            plot_n_sweep(records, plot_path)
        else:
            plot_degradation_sweep(records, plot_path)
        print(f"figure written to {plot_path}")
    return 0


def cmd_synth(args) -> int:
    signal = make_quasi_speech(args.seconds, args.rate, args.seed)
    write_wav(signal, args.out_wav)
    print(f"{signal.duration_s:.1f} s of quasi-speech written to {args.out_wav}")
    return 0


_COMMANDS = {
    "train": cmd_train,
    "degrade": cmd_degrade,
    "restore": cmd_restore,
    "sdr": cmd_sdr,
    "sweep": cmd_sweep,
    "synth": cmd_synth,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ModelFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
