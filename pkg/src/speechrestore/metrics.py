"""Projection-form signal-to-distortion ratio and Pearson correlation.

The SDR here is the single-source, gain-only member of the BSS-EVAL
family: the estimate is split into its projection onto the reference
(the target part) and the residual (the distortion). With one reference
and no interferers the full toolkit metric reduces to exactly this.
"""

from dataclasses import dataclass

import numpy as np

from .audio_io import AudioSignal
from .errors import ValidationError

SDR_CAP_DB = 300.0


@dataclass(frozen=True)
class SdrReport:
    sdr_db: float


def sdr(reference: AudioSignal, estimate: AudioSignal) -> SdrReport:
    """SDR in dB of an estimate against an equal-length reference.

    sdr = 10 log10(||s_t||^2 / ||e||^2) with s_t the projection of the
    estimate onto the reference and e the remainder. Scale-invariant in
    the estimate; zero distortion returns the +300 dB cap (a zero target
    component the -300 dB floor).
    """
    ref = reference.samples
    est = estimate.samples
    if ref.size != est.size:
        raise ValidationError(
            f"length mismatch: reference {ref.size}, estimate {est.size}"
        )
    if ref.size == 0:
        raise ValidationError("signals must be non-empty")
    ref_energy = ref @ ref
    if ref_energy == 0.0:
        raise ValidationError("reference is identically zero")
    gain = (est @ ref) / ref_energy
    target = gain * ref
    residual = est - target
    distortion = residual @ residual
    if distortion == 0.0:
        return SdrReport(SDR_CAP_DB)
    target_energy = target @ target
    if target_energy == 0.0:
        return SdrReport(-SDR_CAP_DB)
    value = 10.0 * np.log10(target_energy / distortion)
    return SdrReport(float(np.clip(value, -SDR_CAP_DB, SDR_CAP_DB)))


def restoration_sdr(
    reference: AudioSignal, estimate: AudioSignal, covered_len: int | None = None
) -> SdrReport:
    """SDR over the frame-covered region with the mean removed from both.

    The restoration pipeline discards DC and leaves trailing unframed
    samples at zero, so fair comparison trims to the covered region and
    compares the zero-mean parts.
    """
    end = reference.samples.size if covered_len is None else covered_len
    ref = reference.samples[:end]
    est = estimate.samples[:end]
    return sdr(
        AudioSignal(ref - ref.mean(), reference.sample_rate_hz),
        AudioSignal(est - est.mean(), estimate.sample_rate_hz),
    )


def pearson(x, y) -> float:
    """Pearson product-moment correlation of two equal-length sequences."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.size != y.size:
        raise ValidationError("sequences must have equal length")
    if x.size < 3:
        raise ValidationError("need at least 3 points")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise ValidationError("correlation of a constant sequence is undefined")
    return float(np.corrcoef(x, y)[0, 1])
