import numpy as np
import pytest

from speechrestore import (
    AudioSignal,
    TrainConfig,
    fit_norm,
    frame,
    init,
    make_quasi_speech,
    normalize,
    train,
)


@pytest.fixture(scope="session")
def tonal_signal():
    """1.5 s of harmonic test material at 4 kHz."""
    return make_quasi_speech(1.5, 4000, seed=9)


@pytest.fixture(scope="session")
def trained_small(tonal_signal):
    """A 64x96x64 model trained well enough to reconstruct tonal_signal.

    Returns (model, clean signal). Shared across tests that need a model
    that actually denoises, without paying desk-scale training time.
    """
    norm = fit_norm(tonal_signal)
    frames = frame(normalize(tonal_signal, norm), 64, 2)
    model = init(64, 96, seed=3, norm=norm)
    model, history = train(
        model, frames, TrainConfig(epochs=40, learning_rate=0.1, seed=7)
    )
    assert history[-1] < history[0]
    return model, tonal_signal


def rng(seed=0):
    return np.random.default_rng(seed)
