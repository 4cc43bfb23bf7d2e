"""Speech restoration through a sigmoid autoencoder: train on clean
frames, then repair sample-replacement corruption by stochastic
re-synthesis, with SDR-based evaluation sweeps."""

from .audio_io import (
    AudioSignal,
    NormParams,
    decimate,
    denormalize,
    fit_norm,
    normalize,
    read_wav,
    write_wav,
)
from .degrade import DegradeSpec, degrade, match_noise_stats
from .errors import (
    AudioFileError,
    DivergenceError,
    ModelFormatError,
    ValidationError,
)
from .experiment import (
    SweepRecord,
    improvement_vs_fraction,
    make_quasi_speech,
    read_records_csv,
    sweep_degradation,
    sweep_n,
    write_records_csv,
)
from .framing import FrameMatrix, frame, frame_count, overlap_add, remove_dc
from .metrics import SdrReport, pearson, restoration_sdr, sdr
from .neural import (
    Autoencoder,
    TrainConfig,
    backprop,
    forward,
    init,
    load,
    save,
    train,
)
from .resynth import ResynthConfig, correct, resynthesize_frame

__all__ = [
    "AudioSignal",
    "NormParams",
    "read_wav",
    "write_wav",
    "decimate",
    "fit_norm",
    "normalize",
    "denormalize",
    "FrameMatrix",
    "frame",
    "frame_count",
    "overlap_add",
    "remove_dc",
    "Autoencoder",
    "TrainConfig",
    "init",
    "forward",
    "backprop",
    "train",
    "save",
    "load",
    "DegradeSpec",
    "match_noise_stats",
    "degrade",
    "ResynthConfig",
    "resynthesize_frame",
    "correct",
    "SdrReport",
    "sdr",
    "restoration_sdr",
    "pearson",
    "SweepRecord",
    "sweep_n",
    "sweep_degradation",
    "improvement_vs_fraction",
    "make_quasi_speech",
    "write_records_csv",
    "read_records_csv",
    "AudioFileError",
    "ModelFormatError",
    "DivergenceError",
    "ValidationError",
]
