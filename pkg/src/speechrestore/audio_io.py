"""Mono PCM WAV input/output, integer-factor decimation, and the affine
map between raw amplitudes and the [0,1] domain the network operates in.
"""

import wave
from dataclasses import dataclass

import numpy as np

from .errors import AudioFileError, ValidationError

# Anti-alias filter geometry used by decimate(); cutoff is relative to the
# target Nyquist frequency.
FILTER_TAPS = 127
CUTOFF_RATIO = 0.45


@dataclass
class AudioSignal:
    """Mono time-domain samples (nominal range [-1, 1]) plus sample rate."""

    samples: np.ndarray
    sample_rate_hz: int

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1:
            raise ValidationError("samples must be one-dimensional")
        if self.sample_rate_hz <= 0:
            raise ValidationError("sample_rate_hz must be positive")

    def __len__(self):
        return self.samples.size

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate_hz


@dataclass(frozen=True)
class NormParams:
    """Affine normalization parameters; normalize/denormalize invert exactly."""

    center: float
    half_range: float

    def __post_init__(self):
        if not self.half_range > 0:
            raise ValidationError("half_range must be positive")


def read_wav(path) -> AudioSignal:
    """Read a PCM WAV file as a mono signal scaled to [-1, 1].

    Multi-channel audio is averaged down to mono. Integer widths of
    8/16/24/32 bits are accepted.

    Raises:
        FileNotFoundError: no such file.
        AudioFileError: non-PCM encoding, unsupported width, or a file
            with no samples.
    """
    try:
        with wave.open(str(path), "rb") as wav:
            n_channels = wav.getnchannels()
            width = wav.getsampwidth()
            rate = wav.getframerate()
            n_frames = wav.getnframes()
            raw = wav.readframes(n_frames)
    except FileNotFoundError:
        raise
    except wave.Error as exc:
        raise AudioFileError(f"{path}: not an uncompressed PCM WAV ({exc})") from exc
    except EOFError as exc:
        raise AudioFileError(f"{path}: truncated or empty WAV file") from exc

    if n_frames == 0 or len(raw) == 0:
        raise AudioFileError(f"{path}: WAV file contains no audio samples")

    if width == 1:
        # 8-bit WAV is unsigned
        data = np.frombuffer(raw, dtype=np.uint8).astype(np.float64)
        data = (data - 128.0) / 128.0
    elif width == 2:
        data = np.frombuffer(raw, dtype="<i2").astype(np.float64) / 32768.0
    elif width == 3:
        as_bytes = np.frombuffer(raw, dtype=np.uint8).reshape(-1, 3)
        value = (
            as_bytes[:, 0].astype(np.int32)
            | (as_bytes[:, 1].astype(np.int32) << 8)
            | (as_bytes[:, 2].astype(np.int32) << 16)
        )
        value = np.where(value >= 1 << 23, value - (1 << 24), value)
        data = value.astype(np.float64) / float(1 << 23)
    elif width == 4:
        data = np.frombuffer(raw, dtype="<i4").astype(np.float64) / float(1 << 31)
    else:
        raise AudioFileError(f"{path}: unsupported sample width {width} bytes")

    if n_channels > 1:
        data = data.reshape(-1, n_channels).mean(axis=1)
    return AudioSignal(data, rate)


def write_wav(signal: AudioSignal, path):
    """Write a signal as 16-bit PCM mono; samples are clipped to [-1, 1].

    The stored value is round(sample * 32768) clipped to the int16 range,
    so a read-back differs from the original by at most one quantization
    step (1/32768) per sample.
    """
    if not np.all(np.isfinite(signal.samples)):
        raise ValidationError("cannot write non-finite samples")
    quantized = np.clip(np.round(signal.samples * 32768.0), -32768, 32767)
    pcm = quantized.astype("<i2")
    with wave.open(str(path), "wb") as wav:
        wav.setnchannels(1)
        wav.setsampwidth(2)
        wav.setframerate(signal.sample_rate_hz)
        wav.writeframes(pcm.tobytes())


def _lowpass_kernel(cutoff_norm: float, taps: int) -> np.ndarray:
    # Hamming-windowed sinc, normalized to unity DC gain. cutoff_norm is in
    # cycles per input sample.
    mid = (taps - 1) // 2
    m = np.arange(taps) - mid
    kernel = 2.0 * cutoff_norm * np.sinc(2.0 * cutoff_norm * m)
    kernel *= np.hamming(taps)
    return kernel / kernel.sum()


def decimate(signal: AudioSignal, target_rate_hz: int) -> AudioSignal:
    """Reduce the sample rate by an integer factor.

    A zero-phase FIR low-pass (symmetric padding, no group delay) is
    applied before subsampling. Output length is ceil(len / factor).

    Raises:
        ValidationError: target rate does not divide the input rate, or
            the signal is too short for the filter.
    """
    if target_rate_hz <= 0:
        raise ValidationError("target rate must be positive")
    if signal.sample_rate_hz % target_rate_hz != 0:
        raise ValidationError(
            f"decimation factor {signal.sample_rate_hz}/{target_rate_hz} "
            "is not an integer"
        )
    factor = signal.sample_rate_hz // target_rate_hz
    if factor == 1:
        return AudioSignal(signal.samples.copy(), target_rate_hz)

    pad = (FILTER_TAPS - 1) // 2
    if signal.samples.size <= pad:
        raise ValidationError(
            f"signal too short to decimate: need more than {pad} samples"
        )
    cutoff_norm = CUTOFF_RATIO * (target_rate_hz / 2.0) / signal.sample_rate_hz
    kernel = _lowpass_kernel(cutoff_norm, FILTER_TAPS)
    padded = np.pad(signal.samples, pad, mode="symmetric")
    filtered = np.convolve(padded, kernel, mode="valid")
    return AudioSignal(filtered[::factor], target_rate_hz)


def fit_norm(signal: AudioSignal) -> NormParams:
    """Fit normalization parameters: center on the mean, scale to the peak
    deviation. Constant signals cannot be normalized."""
    if signal.samples.size == 0 or np.all(signal.samples == signal.samples[0]):
        raise ValidationError("cannot fit normalization to a constant signal")
    center = float(np.mean(signal.samples))
    half_range = float(np.max(np.abs(signal.samples - center)))
    return NormParams(center, half_range)


def normalize(signal: AudioSignal, params: NormParams) -> AudioSignal:
    """Map amplitudes to [0, 1] with mean at 0.5 (for self-fit params).

    Values outside [0, 1], which occur when params come from a different
    signal, are clipped.
    """
    scaled = 0.5 + (signal.samples - params.center) / (2.0 * params.half_range)
    return AudioSignal(np.clip(scaled, 0.0, 1.0), signal.sample_rate_hz)


def denormalize(signal: AudioSignal, params: NormParams) -> AudioSignal:
    """Invert normalize() for in-range values."""
    raw = (signal.samples - 0.5) * (2.0 * params.half_range) + params.center
    return AudioSignal(raw, signal.sample_rate_hz)
