import numpy as np
import pytest

from speechrestore import (
    AudioSignal,
    ValidationError,
    pearson,
    restoration_sdr,
    sdr,
)
from speechrestore.metrics import SDR_CAP_DB


def _signal(samples):
    return AudioSignal(np.asarray(samples, dtype=float), 100)


class TestSdr:
    def test_identity_hits_cap(self):
        ref = _signal(np.random.default_rng(0).uniform(-1, 1, 256))
        assert sdr(ref, ref).sdr_db == SDR_CAP_DB == 300.0

    def test_double_amplitude_hits_cap(self):
        ref = _signal(np.random.default_rng(1).uniform(-1, 1, 256))
        est = _signal(2.0 * ref.samples)
        assert sdr(ref, est).sdr_db == 300.0

    def test_equal_power_orthogonal_noise_is_zero_db(self):
        # interleaved support makes the dot product exactly zero
        rng = np.random.default_rng(2)
        ref = np.zeros(512)
        noise = np.zeros(512)
        ref[0::2] = rng.uniform(-1, 1, 256)
        noise[1::2] = rng.uniform(-1, 1, 256)
        noise *= np.linalg.norm(ref) / np.linalg.norm(noise)
        report = sdr(_signal(ref), _signal(ref + noise))
        assert abs(report.sdr_db) < 1e-9

    def test_orthogonal_noise_energy_ratio(self):
        rng = np.random.default_rng(3)
        ref = np.zeros(400)
        noise = np.zeros(400)
        ref[0::2] = rng.uniform(-1, 1, 200)
        noise[1::2] = rng.uniform(-1, 1, 200)
        expected = 10 * np.log10((ref @ ref) / (noise @ noise))
        report = sdr(_signal(ref), _signal(ref + noise))
        assert report.sdr_db == pytest.approx(expected, abs=1e-9)

    def test_scale_invariance_exact_for_binary_scales(self):
        rng = np.random.default_rng(4)
        ref = _signal(rng.uniform(-1, 1, 300))
        est = _signal(ref.samples + rng.normal(0, 0.1, 300))
        base = sdr(ref, est).sdr_db
        for alpha in (0.5, 2.0, 4.0, 0.25):
            assert sdr(ref, _signal(alpha * est.samples)).sdr_db == base

    def test_scale_invariance_arbitrary_scale(self):
        rng = np.random.default_rng(5)
        ref = _signal(rng.uniform(-1, 1, 300))
        est = _signal(ref.samples + rng.normal(0, 0.1, 300))
        base = sdr(ref, est).sdr_db
        assert sdr(ref, _signal(1.7 * est.samples)).sdr_db == pytest.approx(base, abs=1e-9)

    def test_joint_scaling_invariance(self):
        rng = np.random.default_rng(6)
        ref = rng.uniform(-1, 1, 300)
        est = ref + rng.normal(0, 0.2, 300)
        base = sdr(_signal(ref), _signal(est)).sdr_db
        scaled = sdr(_signal(0.5 * ref), _signal(0.5 * est)).sdr_db
        assert scaled == pytest.approx(base, abs=1e-9)

    def test_length_mismatch(self):
        with pytest.raises(ValidationError, match="length"):
            sdr(_signal([1.0, 2.0]), _signal([1.0]))

    def test_zero_reference_rejected(self):
        with pytest.raises(ValidationError, match="zero"):
            sdr(_signal([0.0, 0.0]), _signal([1.0, 2.0]))

    def test_orthogonal_estimate_hits_floor(self):
        report = sdr(_signal([1.0, 0.0]), _signal([0.0, 1.0]))
        assert report.sdr_db == -300.0


class TestRestorationSdr:
    def test_trims_to_covered_region(self):
        rng = np.random.default_rng(7)
        ref = rng.uniform(-1, 1, 100)
        est = np.concatenate([ref[:80], np.zeros(20)])
        assert restoration_sdr(_signal(ref), _signal(est), covered_len=80).sdr_db == 300.0

    def test_ignores_dc_offsets(self):
        rng = np.random.default_rng(8)
        ref = rng.uniform(-1, 1, 100)
        est = ref + 0.37
        assert restoration_sdr(_signal(ref), _signal(est)).sdr_db == pytest.approx(
            300.0, abs=1e-6
        )


class TestPearson:
    def test_perfect_linear(self):
        x = np.arange(10.0)
        assert pearson(x, 2 * x + 1) == pytest.approx(1.0, abs=1e-12)

    def test_perfect_inverse(self):
        x = np.arange(10.0)
        assert pearson(x, -x) == pytest.approx(-1.0, abs=1e-12)

    def test_against_two_pass_oracle(self):
        rng = np.random.default_rng(9)
        x = rng.normal(0, 2, 100)
        y = 0.4 * x + rng.normal(0, 1, 100)
        xc = x - x.mean()
        yc = y - y.mean()
        expected = float((xc @ yc) / np.sqrt((xc @ xc) * (yc @ yc)))
        assert pearson(x, y) == pytest.approx(expected, abs=1e-12)

    def test_constant_rejected(self):
        with pytest.raises(ValidationError, match="constant"):
            pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])

    def test_short_input_rejected(self):
        with pytest.raises(ValidationError):
            pearson([1.0, 2.0], [3.0, 4.0])

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            pearson([1.0, 2.0, 3.0], [1.0, 2.0])
