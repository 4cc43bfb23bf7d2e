"""Stochastic re-synthesis of a corrupted signal through the trained
autoencoder.

Each degraded frame is pushed through the network N times, every pass
with a fresh random half of its samples overwritten, and the N outputs
are averaged. Because the replacement noise differs per pass, corrupted
samples wash out of the average while the learned structure survives.
The averaged frames are centered (the mean frame over the whole signal
is subtracted to cancel always-on output units), overlap-added, and
re-scaled to the raw amplitude domain.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from threadpoolctl import threadpool_limits

from .audio_io import AudioSignal, normalize
from .errors import ValidationError
from .framing import FrameMatrix, frame, overlap_add
from .neural import Autoencoder, forward, forward_batch
from .seeding import stream

# Frames handed to one worker at a time; large enough that scheduling
# overhead is negligible, small enough to balance load.
_WORK_BLOCK = 256


@dataclass(frozen=True)
class ResynthConfig:
    n_passes: int = 100
    inner_fraction: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.n_passes < 1:
            raise ValidationError("n_passes must be >= 1")
        if not 0.0 <= self.inner_fraction <= 1.0:
            raise ValidationError("inner_fraction must lie in [0, 1]")


def _inner_count(cfg: ResynthConfig, frame_len: int) -> int:
    return int(np.floor(cfg.inner_fraction * frame_len + 0.5))


def resynthesize_frame(
    model: Autoencoder,
    values: np.ndarray,
    cfg: ResynthConfig,
    frame_index: int,
) -> np.ndarray:
    """Average of n_passes network outputs for one normalized frame.

    Pass k overwrites a fresh uniform random subset (without replacement,
    round(inner_fraction * frame_len) positions) with uniform [0,1] draws
    before the forward pass. All randomness comes from a stream keyed by
    (cfg.seed, frame_index), with pass k reading row k of the draws, so
    frames can be processed in any order or in parallel without changing
    the result.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (model.input_len,):
        raise ValidationError(
            f"frame length {values.shape} does not match model input "
            f"{model.input_len}"
        )
    count = _inner_count(cfg, model.input_len)
    if count == 0:
        # Every pass would be the untouched frame; the average of identical
        # outputs is the plain forward pass, computed exactly.
        return forward(model, values)

    batch = _degraded_passes(model.input_len, values, cfg, count, frame_index)
    outputs = forward_batch(model, batch)
    return outputs.mean(axis=0)


def _degraded_passes(frame_len, values, cfg, count, frame_index):
    """(n_passes, frame_len) matrix of independently re-corrupted copies."""
    rng = stream(cfg.seed, frame_index)
    scores = rng.random((cfg.n_passes, frame_len))
    replacements = rng.random((cfg.n_passes, count))
    if count == frame_len:
        return replacements
    # The count smallest scores per row are a uniform random subset.
    positions = np.argpartition(scores, count - 1, axis=1)[:, :count]
    batch = np.repeat(values[None, :], cfg.n_passes, axis=0)
    np.put_along_axis(batch, positions, replacements, axis=1)
    return batch


def correct(
    model: Autoencoder,
    degraded: AudioSignal,
    cfg: ResynthConfig,
    hop: int = 1,
    threads: int = 1,
) -> AudioSignal:
    """Restore a degraded raw-amplitude signal with the trained model.

    Steps: normalize with the model's stored (training-set) parameters and
    clip to [0,1]; slice into frames of the model's input length at the
    given hop; re-synthesize every frame; subtract the mean corrected
    frame from each frame; overlap-add with per-sample averaging; remove
    DC over the covered region; scale back to raw amplitude (scale only,
    no offset, since the signal is deliberately zero-mean by now).

    Output has the input's length; trailing samples that no full frame
    covers are zero. Deterministic for fixed (model, signal, cfg, hop)
    regardless of thread count.
    """
    if degraded.samples.size < model.frame_len:
        raise ValidationError(
            f"signal of {degraded.samples.size} samples is shorter than one "
            f"model frame ({model.frame_len})"
        )
    normalized = normalize(degraded, model.norm)
    frames = frame(normalized, model.frame_len, hop)

    def block(start: int) -> list[np.ndarray]:
        stop = min(start + _WORK_BLOCK, len(frames))
        return [
            resynthesize_frame(model, frames.frames[i], cfg, i)
            for i in range(start, stop)
        ]

    starts = range(0, len(frames), _WORK_BLOCK)
    # One BLAS thread per worker: the per-frame results (and therefore the
    # output) stay bit-identical for every thread count.
    with threadpool_limits(limits=1, user_api="blas"):
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                blocks = list(pool.map(block, starts))
        else:
            blocks = [block(s) for s in starts]
    corrected = np.vstack([row for rows in blocks for row in rows])

    corrected -= corrected.mean(axis=0)
    rebuilt = overlap_add(
        FrameMatrix(corrected, model.frame_len, hop, degraded.samples.size),
        degraded.sample_rate_hz,
    )
    out = rebuilt.samples
    covered = frames.covered_len
    out[:covered] -= out[:covered].mean()
    out *= 2.0 * model.norm.half_range
    return AudioSignal(out, degraded.sample_rate_hz)
