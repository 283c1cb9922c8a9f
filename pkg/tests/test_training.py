"""Adam optimizer and the two-phase trainer."""

import numpy as np
import pytest

from audioplc.framing import AudioSignal
from audioplc.generator import GeneratorConfig
from audioplc.synth import sine_corpus
from audioplc.training import Adam, TrainConfig, segment_tracks, train


class TestAdam:
    def test_single_step_moves_against_gradient(self):
        adam = Adam(lr=0.1)
        (p,) = adam.step([np.array([1.0, -1.0])], [np.array([1.0, -1.0])])
        # first step magnitude is ~lr regardless of gradient scale
        np.testing.assert_allclose(p, [0.9, -0.9], atol=1e-6)

    def test_none_gradient_means_no_update(self):
        adam = Adam(lr=0.1)
        (p,) = adam.step([np.array([2.0])], [None])
        np.testing.assert_array_equal(p, [2.0])

    def test_time_based_decay(self):
        adam = Adam(lr=1.0, decay=1.0)
        g = [np.array([1.0])]
        p = [np.array([0.0])]
        p = adam.step(p, g)       # lr_1 = 1/(1+0) = 1
        first = 0.0 - p[0][0]
        p2 = adam.step(p, g)      # lr_2 = 1/(1+1) = 0.5
        second = p[0][0] - p2[0][0]
        assert second < first

    def test_quadratic_converges(self):
        adam = Adam(lr=0.05)
        p = [np.array([3.0])]
        for _ in range(500):
            p = adam.step(p, [2 * p[0]])  # d/dp p^2
        assert abs(p[0][0]) < 1e-2


class TestSegmentation:
    def test_tracks_cut_into_fixed_blocks(self):
        track = AudioSignal(np.zeros(16000), 16000)  # 160 frames
        segs = segment_tracks([track], 100, 0.5, min_frames=2)  # 80 frames/seg
        assert [len(s) for s in segs] == [80, 80]

    def test_short_trailing_block_dropped(self):
        track = AudioSignal(np.zeros(8100), 16000)  # 81 frames
        segs = segment_tracks([track], 100, 0.5, min_frames=4)
        assert [len(s) for s in segs] == [80]


@pytest.fixture(scope="module")
def micro_setup():
    gen = GeneratorConfig(frame_len=20, lstm_units=(8, 8), dense_units=(8, 20))
    corpus = sine_corpus(2, 0.1, seed=50)  # 2 tracks x 80 frames
    return gen, corpus


class TestTrain:
    def test_zero_epochs_returns_initialization(self, micro_setup):
        gen, corpus = micro_setup
        cfg = TrainConfig(epochs_plain=0, epochs_stress=0, segment_seconds=0.1,
                          rng_seed=3)
        params, history = train(corpus, gen, cfg)
        assert history == []

        # identical seed, epochs > 0 must start from the same parameters
        cfg2 = TrainConfig(epochs_plain=0, epochs_stress=0, segment_seconds=0.1,
                           rng_seed=3)
        params2, _ = train(corpus, gen, cfg2)
        np.testing.assert_array_equal(params.lstm[0].w_in, params2.lstm[0].w_in)
        np.testing.assert_array_equal(params.dense[-1].weight, params2.dense[-1].weight)

    def test_history_length_is_epoch_sum(self, micro_setup):
        gen, corpus = micro_setup
        cfg = TrainConfig(epochs_plain=2, epochs_stress=1, stress_depth=2,
                          segment_seconds=0.1, dropout_rate=0.1, rng_seed=4)
        _, history = train(corpus, gen, cfg)
        assert len(history) == 3
        assert [h.phase for h in history] == ["plain", "plain", "stress"]

    def test_deterministic_given_seed(self, micro_setup):
        gen, corpus = micro_setup
        cfg = TrainConfig(epochs_plain=2, epochs_stress=0, segment_seconds=0.1,
                          dropout_rate=0.5, rng_seed=5)
        params_a, hist_a = train(corpus, gen, cfg)
        params_b, hist_b = train(corpus, gen, cfg)
        assert [h.loss for h in hist_a] == [h.loss for h in hist_b]
        np.testing.assert_array_equal(params_a.lstm[1].w_rec, params_b.lstm[1].w_rec)

    def test_loss_decreases_on_sine(self, micro_setup):
        gen, corpus = micro_setup
        cfg = TrainConfig(epochs_plain=6, epochs_stress=0, segment_seconds=0.1,
                          dropout_rate=0.1, rng_seed=6)
        _, history = train(corpus, gen, cfg)
        assert history[-1].loss < history[0].loss

    def test_empty_dataset_rejected(self, micro_setup):
        gen, _ = micro_setup
        with pytest.raises(ValueError, match="empty"):
            train([], gen, TrainConfig())

    def test_too_short_tracks_rejected(self, micro_setup):
        gen, _ = micro_setup
        short = [AudioSignal(np.zeros(25), 16000)]  # 2 frames < stress_depth+1
        cfg = TrainConfig(epochs_plain=1, epochs_stress=1, stress_depth=3,
                          segment_seconds=0.1)
        with pytest.raises(ValueError, match="segments"):
            train(short, gen, cfg)


def test_train_config_validation():
    with pytest.raises(ValueError, match="stress_depth"):
        TrainConfig(stress_depth=0)
    with pytest.raises(ValueError, match="learning rates"):
        TrainConfig(lr_plain=0.0)
