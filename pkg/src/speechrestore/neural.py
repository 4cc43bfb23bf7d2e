"""Fully-connected sigmoid autoencoder trained by per-example SGD.

The network is input -> hidden -> output with sigmoid units throughout,
a learnable bias on the hidden layer only (the output layer has no bias
term at all), and squared-error reconstruction loss against its own
input. Forward, backprop, and the update rule are written out explicitly;
the only outside help is a BLAS rank-1 routine for the in-place weight
updates.
"""

import struct
from dataclasses import dataclass

import numpy as np
from scipy.linalg.blas import dger

from .audio_io import NormParams
from .errors import DivergenceError, ModelFormatError, ValidationError
from .framing import FrameMatrix
from .seeding import stream

MODEL_MAGIC = b"DTAE"
MODEL_VERSION = 1
_HEADER = struct.Struct("<4sIIIIdd")
_MAX_DIM = 1 << 24


def sigmoid(t: np.ndarray, out: np.ndarray | None = None) -> np.ndarray:
    """Logistic function 1/(1+e^-t), computed via tanh for stability."""
    out = np.multiply(t, 0.5, out=out)
    np.tanh(out, out=out)
    out += 1.0
    out *= 0.5
    return out


@dataclass
class Autoencoder:
    """Weights of the 3-layer network plus the normalization that maps raw
    audio into its [0,1] input domain.

    w1 is (hidden, input), w2 is (output, hidden) with output == input.
    There is no output-layer bias.
    """

    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    norm: NormParams

    def __post_init__(self):
        self.w1 = np.ascontiguousarray(self.w1, dtype=np.float64)
        self.b1 = np.ascontiguousarray(self.b1, dtype=np.float64)
        self.w2 = np.ascontiguousarray(self.w2, dtype=np.float64)
        hidden, inp = self.w1.shape
        if self.w2.shape != (inp, hidden):
            raise ValidationError(
                f"w2 shape {self.w2.shape} does not mirror w1 shape {self.w1.shape}"
            )
        if self.b1.shape != (hidden,):
            raise ValidationError("b1 must have one entry per hidden unit")
        for arr in (self.w1, self.b1, self.w2):
            if not np.all(np.isfinite(arr)):
                raise ValidationError("weights must be finite")

    @property
    def input_len(self) -> int:
        return self.w1.shape[1]

    @property
    def hidden_len(self) -> int:
        return self.w1.shape[0]

    @property
    def output_len(self) -> int:
        return self.w2.shape[0]

    @property
    def frame_len(self) -> int:
        """Frame length the model consumes; identical to input_len."""
        return self.input_len


@dataclass
class TrainConfig:
    epochs: int
    learning_rate: float = 0.05
    seed: int = 0
    shuffle: bool = True

    def __post_init__(self):
        if self.epochs < 1:
            raise ValidationError("epochs must be >= 1")
        # 0 is allowed so a dry sweep can report the loss without updating.
        if self.learning_rate < 0:
            raise ValidationError("learning_rate must not be negative")


def init(
    input_len: int,
    hidden_len: int,
    seed: int,
    norm: NormParams | None = None,
) -> Autoencoder:
    """Create a model with Glorot-uniform weights and zero hidden biases.

    Deterministic: the same (dims, seed) always produce identical weights.
    """
    if input_len < 1 or hidden_len < 1:
        raise ValidationError("layer sizes must be >= 1")
    rng = stream(seed)
    limit = np.sqrt(6.0 / (input_len + hidden_len))
    w1 = rng.uniform(-limit, limit, size=(hidden_len, input_len))
    w2 = rng.uniform(-limit, limit, size=(input_len, hidden_len))
    b1 = np.zeros(hidden_len)
    return Autoencoder(w1, b1, w2, norm or NormParams(0.0, 1.0))


def forward(model: Autoencoder, x: np.ndarray) -> np.ndarray:
    """Reconstruct one frame: sigmoid(w2 @ sigmoid(w1 @ x + b1))."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.input_len,):
        raise ValidationError(
            f"input length {x.shape} does not match model input {model.input_len}"
        )
    h = sigmoid(model.w1 @ x + model.b1)
    return sigmoid(model.w2 @ h)


def forward_batch(model: Autoencoder, frames: np.ndarray) -> np.ndarray:
    """Forward pass over a (count, input_len) matrix of frames."""
    if frames.ndim != 2 or frames.shape[1] != model.input_len:
        raise ValidationError("frames must be (count, input_len)")
    z1 = frames @ model.w1.T
    z1 += model.b1
    h = sigmoid(z1, out=z1)
    z2 = h @ model.w2.T
    return sigmoid(z2, out=z2)


def backprop(model: Autoencoder, x: np.ndarray):
    """Gradients of L = 0.5 * sum((y - x)^2) w.r.t. (w1, b1, w2).

    The target is the input itself. No output-bias gradient exists because
    the layer has no bias.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.input_len,):
        raise ValidationError(
            f"input length {x.shape} does not match model input {model.input_len}"
        )
    h = sigmoid(model.w1 @ x + model.b1)
    y = sigmoid(model.w2 @ h)
    delta_out = (y - x) * y * (1.0 - y)
    grad_w2 = np.outer(delta_out, h)
    delta_hidden = (model.w2.T @ delta_out) * h * (1.0 - h)
    grad_w1 = np.outer(delta_hidden, x)
    return grad_w1, delta_hidden, grad_w2


def train(model: Autoencoder, frames: FrameMatrix, cfg: TrainConfig, on_epoch=None):
    """Run per-example SGD sweeps over the frame set, in place.

    Each epoch visits every frame once (seeded-shuffled order unless
    cfg.shuffle is off) and applies w <- w - lr * grad immediately.
    Returns (model, per-epoch mean squared reconstruction error); on_epoch
    (if given) is called with (epoch_index, loss) as each epoch finishes.

    Raises:
        DivergenceError: an epoch produced a non-finite loss.
    """
    if frames.frame_len != model.input_len:
        raise ValidationError(
            f"frame length {frames.frame_len} does not match model "
            f"input {model.input_len}"
        )
    data = frames.frames
    if data.size == 0:
        raise ValidationError("no frames to train on")
    if data.min() < 0.0 or data.max() > 1.0:
        raise ValidationError("training frames must be normalized to [0, 1]")

    w1, b1, w2 = model.w1, model.b1, model.w2
    # dger updates the transposed (Fortran-order) views in place.
    w1_t, w2_t = w1.T, w2.T
    lr = cfg.learning_rate
    rng = stream(cfg.seed)
    n = data.shape[0]
    history = []
    for epoch in range(cfg.epochs):
        order = rng.permutation(n) if cfg.shuffle else np.arange(n)
        total_sq = 0.0
        for i in order:
            x = data[i]
            z1 = w1 @ x
            z1 += b1
            h = sigmoid(z1, out=z1)
            z2 = w2 @ h
            y = sigmoid(z2, out=z2)
            err = y - x
            total_sq += err @ err
            delta_out = err
            delta_out *= y
            delta_out *= 1.0 - y
            delta_hidden = w2_t @ delta_out
            delta_hidden *= h
            delta_hidden *= 1.0 - h
            if lr != 0.0:
                dger(-lr, x, delta_hidden, a=w1_t, overwrite_a=1)
                dger(-lr, h, delta_out, a=w2_t, overwrite_a=1)
                b1 -= lr * delta_hidden
        epoch_loss = total_sq / data.size
        if not np.isfinite(epoch_loss):
            raise DivergenceError(f"training diverged at epoch {epoch}")
        history.append(epoch_loss)
        if on_epoch is not None:
            on_epoch(epoch, epoch_loss)
    return model, history


def save(model: Autoencoder, path):
    """Write the binary model file (see load for the layout)."""
    header = _HEADER.pack(
        MODEL_MAGIC,
        MODEL_VERSION,
        model.input_len,
        model.hidden_len,
        model.frame_len,
        model.norm.center,
        model.norm.half_range,
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(model.w1.tobytes())
        fh.write(model.b1.tobytes())
        fh.write(model.w2.tobytes())


def load(path) -> Autoencoder:
    """Read a model file written by save().

    Layout (little-endian, no padding): magic "DTAE", u32 version,
    u32 input_len, u32 hidden_len, u32 frame_len, f64 norm center,
    f64 norm half-range, then w1 / b1 / w2 as row-major f64.

    Raises:
        ModelFormatError: bad magic, unsupported version, implausible
            dimensions, truncated data, or non-finite weights.
    """
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _HEADER.size:
        raise ModelFormatError(f"{path}: file shorter than the model header")
    magic, version, input_len, hidden_len, frame_len, center, half_range = (
        _HEADER.unpack_from(blob)
    )
    if magic != MODEL_MAGIC:
        raise ModelFormatError(f"{path}: bad magic {magic!r}")
    if version != MODEL_VERSION:
        raise ModelFormatError(f"{path}: unsupported format version {version}")
    if not (0 < input_len <= _MAX_DIM and 0 < hidden_len <= _MAX_DIM):
        raise ModelFormatError(
            f"{path}: dimension overflow ({input_len} x {hidden_len})"
        )
    if frame_len != input_len:
        raise ModelFormatError(
            f"{path}: frame length {frame_len} does not match input {input_len}"
        )
    counts = (hidden_len * input_len, hidden_len, input_len * hidden_len)
    expected = _HEADER.size + 8 * sum(counts)
    if len(blob) < expected:
        raise ModelFormatError(
            f"{path}: truncated model file ({len(blob)} of {expected} bytes)"
        )
    if len(blob) > expected:
        raise ModelFormatError(f"{path}: {len(blob) - expected} trailing bytes")
    offset = _HEADER.size
    arrays = []
    for count in counts:
        arrays.append(
            np.frombuffer(blob, dtype="<f8", count=count, offset=offset).copy()
        )
        offset += 8 * count
    w1 = arrays[0].reshape(hidden_len, input_len)
    b1 = arrays[1]
    w2 = arrays[2].reshape(input_len, hidden_len)
    if not all(np.all(np.isfinite(a)) for a in (w1, b1, w2)):
        raise ModelFormatError(f"{path}: non-finite weights")
    if not half_range > 0:
        raise ModelFormatError(f"{path}: invalid normalization scale {half_range}")
    return Autoencoder(w1, b1, w2, NormParams(center, half_range))
