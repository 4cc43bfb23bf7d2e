import numpy as np
import pytest

from speechrestore import (
    AudioSignal,
    ResynthConfig,
    correct,
    decimate,
    fit_norm,
    init,
    load,
    make_quasi_speech,
    read_records_csv,
    read_wav,
    write_wav,
)
from speechrestore.cli import build_parser, main, _resolve_train_params

TRAIN_FLAGS = ["--rate", "8000", "--frame-len", "32", "--hidden", "16",
               "--hop", "8", "--epochs", "1"]


@pytest.fixture(scope="module")
def clean_wav(tmp_path_factory):
    path = tmp_path_factory.mktemp("audio") / "clean.wav"
    write_wav(make_quasi_speech(1.0, 8000, seed=2), path)
    return str(path)


@pytest.fixture(scope="module")
def tiny_model(tmp_path_factory, clean_wav):
    path = tmp_path_factory.mktemp("model") / "tiny.dtae"
    code = main(["train", clean_wav, str(path), *TRAIN_FLAGS,
                 "--seed", "5", "--lr", "0.1"])
    assert code == 0
    return str(path)


@pytest.fixture(scope="module")
def degraded_wav(tmp_path_factory, clean_wav):
    path = tmp_path_factory.mktemp("audio") / "degraded.wav"
    assert main(["degrade", clean_wav, str(path),
                 "--fraction", "0.2", "--seed", "3"]) == 0
    return str(path)


class TestTrain:
    def test_defaults_are_full_scale_recipe(self):
        args = build_parser().parse_args(["train", "in.wav", "out.dtae"])
        params = _resolve_train_params(args)
        assert params == {"rate": 4000, "frame_len": 1000, "hop": 10,
                          "hidden": 2500, "epochs": 600}
        assert args.lr == 0.05

    def test_desk_scale_preset(self):
        args = build_parser().parse_args(
            ["train", "in.wav", "out.dtae", "--desk-scale"]
        )
        assert _resolve_train_params(args) == {
            "rate": 8000, "frame_len": 128, "hop": 4, "hidden": 320,
            "epochs": 50,
        }

    def test_explicit_flag_overrides_preset(self):
        args = build_parser().parse_args(
            ["train", "in.wav", "out.dtae", "--desk-scale", "--epochs", "3"]
        )
        assert _resolve_train_params(args)["epochs"] == 3

    def test_zero_lr_writes_init_weights(self, tmp_path, clean_wav):
        model_path = tmp_path / "frozen.dtae"
        code = main(["train", clean_wav, str(model_path), *TRAIN_FLAGS,
                     "--lr", "0", "--seed", "5"])
        assert code == 0
        trained = load(model_path)
        norm = fit_norm(decimate(read_wav(clean_wav), 8000))
        fresh = init(32, 16, seed=5, norm=norm)
        assert np.array_equal(trained.w1, fresh.w1)
        assert np.array_equal(trained.w2, fresh.w2)
        assert trained.norm == fresh.norm

    def test_missing_input_exits_3(self, tmp_path):
        code = main(["train", str(tmp_path / "ghost.wav"),
                     str(tmp_path / "out.dtae"), *TRAIN_FLAGS])
        assert code == 3


class TestDegrade:
    def test_deterministic_output_files(self, tmp_path, clean_wav):
        a = tmp_path / "a.wav"
        b = tmp_path / "b.wav"
        for path in (a, b):
            assert main(["degrade", clean_wav, str(path),
                         "--fraction", "0.1", "--seed", "7"]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_fraction_zero_identity(self, tmp_path, clean_wav):
        out = tmp_path / "same.wav"
        assert main(["degrade", clean_wav, str(out), "--fraction", "0"]) == 0
        original = read_wav(clean_wav).samples
        assert np.abs(read_wav(out).samples - original).max() <= 1 / 32768

    def test_invalid_fraction_no_output(self, tmp_path, clean_wav, capsys):
        out = tmp_path / "never.wav"
        assert main(["degrade", clean_wav, str(out), "--fraction", "1.2"]) == 2
        assert not out.exists()
        assert "fraction" in capsys.readouterr().err

    def test_prints_noise_stats(self, tmp_path, clean_wav, capsys):
        out = tmp_path / "d.wav"
        main(["degrade", clean_wav, str(out), "--fraction", "0.5"])
        text = capsys.readouterr().out
        assert "mean=" in text and "std=" in text


class TestRestore:
    def test_restored_output_zero_mean(self, tmp_path, tiny_model, degraded_wav):
        out = tmp_path / "restored.wav"
        assert main(["restore", degraded_wav, tiny_model, str(out),
                     "--n", "4", "--hop", "8", "--seed", "1"]) == 0
        samples = read_wav(out).samples
        assert abs(samples.mean()) <= 1 / 32768

    def test_deterministic_given_seed(self, tmp_path, tiny_model, degraded_wav):
        a = tmp_path / "r1.wav"
        b = tmp_path / "r2.wav"
        for path in (a, b):
            assert main(["restore", degraded_wav, tiny_model, str(path),
                         "--n", "3", "--hop", "8", "--seed", "9",
                         "--threads", "2"]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_plain_forward_pipeline_matches_library(
        self, tmp_path, tiny_model, degraded_wav
    ):
        out = tmp_path / "fw.wav"
        assert main(["restore", degraded_wav, tiny_model, str(out),
                     "--n", "1", "--inner-fraction", "0", "--hop", "8"]) == 0
        model = load(tiny_model)
        expected = correct(
            model, read_wav(degraded_wav),
            ResynthConfig(n_passes=1, inner_fraction=0.0, seed=0), hop=8,
        )
        written = tmp_path / "expected.wav"
        write_wav(expected, written)
        assert out.read_bytes() == written.read_bytes()

    def test_missing_model_exits_3(self, tmp_path, degraded_wav):
        assert main(["restore", degraded_wav, str(tmp_path / "no.dtae"),
                     str(tmp_path / "out.wav")]) == 3


class TestSdrCommand:
    def test_identical_files_print_cap(self, clean_wav, capsys):
        assert main(["sdr", clean_wav, clean_wav]) == 0
        assert capsys.readouterr().out.strip() == "300.00"

    def test_scale_invariance(self, tmp_path, capsys):
        # amplitudes chosen so the halved copy quantizes exactly
        samples = np.random.default_rng(0).integers(-16000, 16000, 400) * 2
        ref = tmp_path / "ref.wav"
        half = tmp_path / "half.wav"
        write_wav(AudioSignal(samples / 32768.0, 8000), ref)
        write_wav(AudioSignal(samples / 2 / 32768.0, 8000), half)
        assert main(["sdr", str(ref), str(half)]) == 0
        assert capsys.readouterr().out.strip() == "300.00"

    def test_length_mismatch_exits_2(self, tmp_path, clean_wav):
        short = tmp_path / "short.wav"
        write_wav(make_quasi_speech(0.5, 8000, seed=2), short)
        assert main(["sdr", clean_wav, str(short)]) == 2


class TestSweep:
    def test_degradation_mode_rows_and_plot(
        self, tmp_path, tiny_model, clean_wav, capsys
    ):
        csv_out = tmp_path / "sweep.csv"
        code = main([
            "sweep", clean_wav, tiny_model, str(csv_out),
            "--mode", "degradation",
            "--fractions", "0.2", "0.5", "0.8",
            "--seeds", "0", "1",
            "--n", "2", "--hop", "8",
        ])
        assert code == 0
        records = read_records_csv(csv_out)
        assert len(records) == 3 * 2
        out = capsys.readouterr().out
        assert "Pearson r" in out
        figure = tmp_path / "sweep.png"
        assert figure.exists() and figure.stat().st_size > 0

    def test_n_mode_single_point(self, tmp_path, tiny_model, clean_wav):
        csv_out = tmp_path / "n.csv"
        code = main([
            "sweep", clean_wav, tiny_model, str(csv_out),
            "--mode", "n", "--n-grid", "1", "--seeds", "0",
            "--fraction", "0.1", "--hop", "8", "--no-plot",
        ])
        assert code == 0
        records = read_records_csv(csv_out)
        assert len(records) == 1
        assert records[0].n_passes == 1
        assert not (tmp_path / "n.png").exists()

    def test_missing_model_clean_error(self, tmp_path, clean_wav, capsys):
        csv_out = tmp_path / "never.csv"
        code = main(["sweep", clean_wav, str(tmp_path / "ghost.dtae"),
                     str(csv_out), "--mode", "n"])
        assert code == 3
        assert not csv_out.exists()
        assert "error" in capsys.readouterr().err


class TestSynth:
    def test_writes_playable_wav(self, tmp_path):
        out = tmp_path / "synthetic.wav"
        assert main(["synth", str(out), "--seconds", "0.5",
                     "--rate", "4000", "--seed", "1"]) == 0
        signal = read_wav(out)
        assert signal.sample_rate_hz == 4000
        assert len(signal) == 2000


class TestHelp:
    def test_train_help_documents_full_scale_defaults(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["train", "--help"])
        assert excinfo.value.code == 0
        text = capsys.readouterr().out
        for value in ("4000", "1000", "10", "2500", "600", "0.05"):
            assert value in text

    def test_restore_help_documents_recipe_defaults(self, capsys):
        with pytest.raises(SystemExit):
            main(["restore", "--help"])
        text = capsys.readouterr().out
        assert "100" in text and "0.5" in text
        assert "default: 1" in text
