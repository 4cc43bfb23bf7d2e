"""Nonlinear corruption: overwrite a chosen fraction of samples with
Gaussian draws matched to the signal's own mean and standard deviation.

This is replacement, not additive noise: untouched samples stay
bit-identical.
"""

from dataclasses import dataclass

import numpy as np

from .audio_io import AudioSignal
from .errors import ValidationError
from .seeding import stream


@dataclass(frozen=True)
class DegradeSpec:
    fraction: float
    noise_mean: float
    noise_std: float
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.fraction <= 1.0:
            raise ValidationError("fraction must lie in [0, 1]")
        if self.noise_std < 0.0:
            raise ValidationError("noise_std must be non-negative")


def match_noise_stats(signal: AudioSignal):
    """Mean and (population) standard deviation of the signal, the
    statistics the replacement noise must reproduce."""
    if signal.samples.size == 0:
        raise ValidationError("cannot match statistics of an empty signal")
    return float(np.mean(signal.samples)), float(np.std(signal.samples))


def replacement_count(fraction: float, length: int) -> int:
    """Number of samples replaced: round(fraction * length), half up."""
    return int(np.floor(fraction * length + 0.5))


def degrade(signal: AudioSignal, spec: DegradeSpec) -> AudioSignal:
    """Replace round(fraction * n) distinct random samples with noise.

    Positions come from a seeded shuffle, so for a fixed seed the
    replacement sets are nested as the fraction grows: raising the
    fraction only corrupts additional samples, never different ones.
    """
    n = signal.samples.size
    count = replacement_count(spec.fraction, n)
    out = signal.samples.copy()
    if count > 0:
        rng = stream(spec.seed)
        positions = rng.permutation(n)[:count]
        noise = rng.normal(spec.noise_mean, spec.noise_std, size=n)[:count]
        out[positions] = noise
    return AudioSignal(out, signal.sample_rate_hz)
