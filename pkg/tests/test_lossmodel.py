"""Two-state Markov loss model: sampling statistics and mask plumbing."""

import re

import numpy as np
import pytest

from audioplc.framing import AudioSignal, frame_signal
from audioplc.lossmodel import (
    MarkovLossModel,
    apply_mask,
    expected_drop_rate,
    read_mask_file,
    sample_mask,
    write_mask_file,
)


class TestSampleMask:
    def test_absorbing_no_loss(self):
        model = MarkovLossModel(p_loss=0.3, p_noloss=1.0)
        for seed in (0, 1, 99):
            np.testing.assert_array_equal(
                sample_mask(model, 50, seed), np.ones(50, dtype=np.int8)
            )

    def test_absorbing_loss_gives_1s_then_0s(self):
        model = MarkovLossModel(p_loss=1.0, p_noloss=0.6)
        for seed in range(10):
            mask = "".join(str(int(m)) for m in sample_mask(model, 80, seed))
            assert re.fullmatch(r"1+0*", mask)

    def test_starts_in_no_loss_state(self):
        model = MarkovLossModel(p_loss=0.9, p_noloss=0.1)
        for seed in range(20):
            assert sample_mask(model, 10, seed)[0] == 1

    def test_empirical_rate_light_loss(self):
        model = MarkovLossModel(p_loss=0.1, p_noloss=0.9)
        mask = sample_mask(model, 10**6, 7)
        drop = 1.0 - mask.mean()
        assert abs(drop - 0.10) < 0.005

    def test_burst_lengths_geometric(self):
        for p_loss in (0.1, 0.5, 0.9):
            model = MarkovLossModel(p_loss=p_loss, p_noloss=0.5)
            mask = sample_mask(model, 400_000, 11)
            runs = [len(r) for r in re.findall(r"0+", "".join(map(str, mask)))]
            mean_run = np.mean(runs)
            expected = 1.0 / (1.0 - p_loss)
            assert abs(mean_run - expected) / expected < 0.05

    def test_seed_determinism(self):
        model = MarkovLossModel(p_loss=0.4, p_noloss=0.7)
        np.testing.assert_array_equal(
            sample_mask(model, 1000, 5), sample_mask(model, 1000, 5)
        )

    def test_zero_length_rejected(self):
        with pytest.raises(ValueError, match=">= 1"):
            sample_mask(MarkovLossModel(0.5, 0.5), 0, 0)

    def test_probability_validation(self):
        with pytest.raises(ValueError, match="p_loss"):
            MarkovLossModel(p_loss=1.2, p_noloss=0.5)


class TestExpectedDropRate:
    def test_table_values(self):
        assert expected_drop_rate(MarkovLossModel(0.1, 0.9)) == pytest.approx(0.10)
        assert expected_drop_rate(MarkovLossModel(0.9, 0.1)) == pytest.approx(0.90)
        assert expected_drop_rate(MarkovLossModel(0.5, 0.5)) == pytest.approx(0.50)

    def test_degenerate_rejected(self):
        with pytest.raises(ValueError, match="stationary"):
            expected_drop_rate(MarkovLossModel(1.0, 1.0))

    def test_matches_empirical_across_grid(self):
        pairs = [(0.1, 0.9), (0.5, 0.9), (0.1, 0.5), (0.1, 0.1), (0.5, 0.5),
                 (0.9, 0.9), (0.5, 0.1), (0.9, 0.5), (0.9, 0.1)]
        for p_l, p_n in pairs:
            model = MarkovLossModel(p_l, p_n)
            mask = sample_mask(model, 200_000, 13)
            assert abs((1.0 - mask.mean()) - expected_drop_rate(model)) < 0.01


class TestApplyMask:
    @pytest.fixture
    def seq(self):
        rng = np.random.default_rng(0)
        return frame_signal(AudioSignal(rng.uniform(-1, 1, 40), 16000), 10)

    def test_all_received_identity(self, seq):
        out = apply_mask(seq, np.ones(4, dtype=int))
        np.testing.assert_array_equal(out.frames, seq.frames)

    def test_all_lost_silence(self, seq):
        out = apply_mask(seq, np.zeros(4, dtype=int))
        np.testing.assert_array_equal(out.frames, np.zeros((4, 10)))

    def test_mixed_mask(self, seq):
        mask = np.array([1, 0, 1, 0])
        out = apply_mask(seq, mask)
        np.testing.assert_array_equal(out.frames[0], seq.frames[0])
        np.testing.assert_array_equal(out.frames[2], seq.frames[2])
        np.testing.assert_array_equal(out.frames[1], np.zeros(10))
        np.testing.assert_array_equal(out.frames[3], np.zeros(10))

    def test_idempotent(self, seq):
        mask = np.array([1, 0, 0, 1])
        once = apply_mask(seq, mask)
        twice = apply_mask(once, mask)
        np.testing.assert_array_equal(once.frames, twice.frames)

    def test_length_mismatch_rejected(self, seq):
        with pytest.raises(ValueError, match="mask length"):
            apply_mask(seq, np.ones(5, dtype=int))


class TestMaskFiles:
    def test_roundtrip_with_header(self, tmp_path):
        model = MarkovLossModel(0.1, 0.9)
        mask = sample_mask(model, 160, 3)
        path = tmp_path / "mask.txt"
        write_mask_file(path, mask, model=model, seed=3)
        text = path.read_text()
        assert text.startswith("#frames=160 p_L=0.1 p_N=0.9 seed=3\n")
        (parsed,) = read_mask_file(path)
        np.testing.assert_array_equal(parsed, mask)

    def test_multiple_masks_per_file(self, tmp_path):
        masks = [np.array([1, 0, 1], dtype=np.int8), np.array([1, 1, 1], dtype=np.int8)]
        path = tmp_path / "masks.txt"
        write_mask_file(path, masks)
        parsed = read_mask_file(path)
        assert len(parsed) == 2
        np.testing.assert_array_equal(parsed[0], masks[0])

    def test_garbage_rejected(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("11x01\n")
        with pytest.raises(ValueError, match="'0'/'1'"):
            read_mask_file(path)
