"""Evaluation sweeps: restoration quality versus re-synthesis count and
versus degradation level, recorded as CSV rows.

Within one outer seed the degraded signal is identical across every grid
point that shares it, so the swept variable is the only thing changing.
"""

import csv
from dataclasses import dataclass

import numpy as np

from .audio_io import AudioSignal
from .degrade import DegradeSpec, degrade, match_noise_stats
from .errors import ValidationError
from .framing import frame_count
from .metrics import pearson, restoration_sdr
from .neural import Autoencoder
from .resynth import ResynthConfig, correct
from .seeding import stream

CSV_HEADER = [
    "degradation_fraction",
    "n_passes",
    "seed",
    "sdr_degraded_db",
    "sdr_corrected_db",
]


@dataclass(frozen=True)
class SweepRecord:
    degradation_fraction: float
    n_passes: int
    seed: int
    sdr_degraded_db: float
    sdr_corrected_db: float


def _covered_len(model: Autoencoder, signal: AudioSignal, hop: int) -> int:
    count = frame_count(signal.samples.size, model.frame_len, hop)
    return (count - 1) * hop + model.frame_len


def _evaluate_point(model, clean, degraded, n_passes, seed, hop, threads,
                    inner_fraction):
    restored = correct(
        model,
        degraded,
        ResynthConfig(n_passes=n_passes, inner_fraction=inner_fraction, seed=seed),
        hop=hop,
        threads=threads,
    )
    covered = _covered_len(model, clean, hop)
    return (
        restoration_sdr(clean, degraded, covered).sdr_db,
        restoration_sdr(clean, restored, covered).sdr_db,
    )


def sweep_n(
    model: Autoencoder,
    clean_test: AudioSignal,
    fraction: float,
    n_values,
    seeds,
    hop: int = 1,
    threads: int = 1,
    inner_fraction: float = 0.5,
):
    """SDR of degraded and corrected audio for each re-synthesis count.

    The degradation seed depends only on the outer seed, so every N sees
    the byte-identical degraded signal.
    """
    noise_mean, noise_std = match_noise_stats(clean_test)
    records = []
    for seed in seeds:
        degraded = degrade(
            clean_test, DegradeSpec(fraction, noise_mean, noise_std, seed=seed)
        )
        for n_passes in n_values:
            sdr_deg, sdr_cor = _evaluate_point(
                model, clean_test, degraded, n_passes, seed, hop, threads,
                inner_fraction,
            )
            records.append(
                SweepRecord(fraction, int(n_passes), int(seed), sdr_deg, sdr_cor)
            )
    return sorted(
        records, key=lambda r: (r.degradation_fraction, r.n_passes, r.seed)
    )


def sweep_degradation(
    model: Autoencoder,
    clean_test: AudioSignal,
    fractions,
    n_passes: int,
    seeds,
    hop: int = 1,
    threads: int = 1,
    inner_fraction: float = 0.5,
):
    """SDR of degraded and corrected audio across degradation levels at a
    fixed re-synthesis count."""
    noise_mean, noise_std = match_noise_stats(clean_test)
    records = []
    for seed in seeds:
        for fraction in fractions:
            degraded = degrade(
                clean_test,
                DegradeSpec(fraction, noise_mean, noise_std, seed=seed),
            )
            sdr_deg, sdr_cor = _evaluate_point(
                model, clean_test, degraded, n_passes, seed, hop, threads,
                inner_fraction,
            )
            records.append(
                SweepRecord(
                    float(fraction), int(n_passes), int(seed), sdr_deg, sdr_cor
                )
            )
    return sorted(
        records, key=lambda r: (r.degradation_fraction, r.n_passes, r.seed)
    )


def improvement_vs_fraction(records) -> float:
    """Pearson r between degradation fraction and the per-fraction median
    SDR improvement (corrected minus degraded)."""
    by_fraction = {}
    for rec in records:
        by_fraction.setdefault(rec.degradation_fraction, []).append(
            rec.sdr_corrected_db - rec.sdr_degraded_db
        )
    fractions = sorted(by_fraction)
    medians = [float(np.median(by_fraction[f])) for f in fractions]
    return pearson(fractions, medians)


def write_records_csv(records, path):
    """Write sweep records; floats keep full round-trip precision."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for rec in records:
            writer.writerow(
                [
                    repr(rec.degradation_fraction),
                    rec.n_passes,
                    rec.seed,
                    repr(rec.sdr_degraded_db),
                    repr(rec.sdr_corrected_db),
                ]
            )


def read_records_csv(path):
    """Parse a CSV written by write_records_csv back into records."""
    with open(path, "r", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise ValidationError(f"{path}: unexpected CSV header {header}")
        records = []
        for row in reader:
            if len(row) != len(CSV_HEADER):
                raise ValidationError(f"{path}: malformed row {row}")
            records.append(
                SweepRecord(
                    float(row[0]), int(row[1]), int(row[2]),
                    float(row[3]), float(row[4]),
                )
            )
    return records


def make_quasi_speech(
    seconds: float, sample_rate_hz: int, seed: int = 0
) -> AudioSignal:
    """Synthetic speech-like test material.

    A 110 Hz fundamental with three to five harmonics, 4 Hz amplitude
    modulation, and a slow sinusoidal frequency drift. Good enough to
    train and evaluate the restoration path when no recording is at hand.
    """
    if seconds <= 0:
        raise ValidationError("duration must be positive")
    rng = stream(seed)
    n = int(round(seconds * sample_rate_hz))
    t = np.arange(n) / sample_rate_hz

    n_harmonics = int(rng.integers(3, 6))
    drift_rate_hz = rng.uniform(0.05, 0.3)
    drift_depth = rng.uniform(0.01, 0.03)
    fundamental = 110.0 * (
        1.0 + drift_depth * np.sin(2.0 * np.pi * drift_rate_hz * t + rng.uniform(0, 2 * np.pi))
    )
    # Integrated instantaneous frequency keeps the drift artifact-free.
    phase = 2.0 * np.pi * np.cumsum(fundamental) / sample_rate_hz

    wave = np.zeros(n)
    for harmonic in range(1, n_harmonics + 1):
        amplitude = 1.0 / harmonic
        wave += amplitude * np.sin(harmonic * phase + rng.uniform(0, 2 * np.pi))

    modulation = 0.15 + 0.85 * 0.5 * (
        1.0 + np.sin(2.0 * np.pi * 4.0 * t + rng.uniform(0, 2 * np.pi))
    )
    wave *= modulation
    wave *= 0.9 / np.max(np.abs(wave))
    return AudioSignal(wave, sample_rate_hz)
