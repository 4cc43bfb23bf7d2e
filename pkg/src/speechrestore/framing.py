"""Overlapping-frame slicing and count-normalized overlap-add
reconstruction.
"""

from dataclasses import dataclass

import numpy as np

from .audio_io import AudioSignal
from .errors import ValidationError


@dataclass
class FrameMatrix:
    """Equal-length overlapping frames cut from a signal.

    frames has shape (count, frame_len); frame i starts at sample i * hop.
    source_len remembers the original signal length, including any trailing
    samples too short to fill a final frame.
    """

    frames: np.ndarray
    frame_len: int
    hop: int
    source_len: int

    def __post_init__(self):
        if self.frame_len < 1 or self.hop < 1:
            raise ValidationError("frame_len and hop must be >= 1")
        self.frames = np.asarray(self.frames, dtype=np.float64)
        if self.frames.ndim != 2 or self.frames.shape[1] != self.frame_len:
            raise ValidationError("frames must be 2-D with frame_len columns")

    def __len__(self):
        return self.frames.shape[0]

    @property
    def covered_len(self) -> int:
        """Number of leading samples covered by at least one frame."""
        return (len(self) - 1) * self.hop + self.frame_len


def frame_count(source_len: int, frame_len: int, hop: int) -> int:
    """Closed-form number of full frames."""
    if source_len < frame_len:
        return 0
    return (source_len - frame_len) // hop + 1


def frame(signal: AudioSignal, frame_len: int, hop: int) -> FrameMatrix:
    """Slice a signal into overlapping frames of frame_len every hop samples.

    Trailing samples that cannot fill a complete frame are not framed.

    Raises:
        ValidationError: signal shorter than one frame.
    """
    if frame_len < 1 or hop < 1:
        raise ValidationError("frame_len and hop must be >= 1")
    n = signal.samples.size
    if n < frame_len:
        raise ValidationError(
            f"signal of {n} samples is shorter than one frame ({frame_len})"
        )
    windows = np.lib.stride_tricks.sliding_window_view(signal.samples, frame_len)
    return FrameMatrix(windows[::hop].copy(), frame_len, hop, n)


def overlap_add(frames: FrameMatrix, sample_rate_hz: int = 1) -> AudioSignal:
    """Rebuild a signal by averaging overlapping frame contributions.

    Each output sample is the mean of every frame value mapped onto it,
    so re-assembling untouched frames reproduces the source exactly.
    Positions past the last frame (the unframed trailing remainder) are 0.
    """
    # Extended-precision accumulation keeps the sum of k identical values
    # exactly k*x (for k up to 2**11), making the frame->overlap_add
    # round trip bit-exact on covered samples.
    total = np.zeros(frames.source_len, dtype=np.longdouble)
    coverage = np.zeros(frames.source_len, dtype=np.int64)
    hop, width = frames.hop, frames.frame_len
    for i, row in enumerate(frames.frames):
        start = i * hop
        total[start : start + width] += row
        coverage[start : start + width] += 1
    covered = coverage > 0
    out = np.zeros(frames.source_len, dtype=np.float64)
    out[covered] = (total[covered] / coverage[covered]).astype(np.float64)
    return AudioSignal(out, sample_rate_hz)


def remove_dc(signal: AudioSignal) -> AudioSignal:
    """Subtract the mean so the output is zero-mean."""
    if signal.samples.size == 0:
        raise ValidationError("cannot remove DC from an empty signal")
    return AudioSignal(
        signal.samples - np.mean(signal.samples), signal.sample_rate_hz
    )
