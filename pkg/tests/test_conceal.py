"""Concealment wrapper algebra: pass-through, substitution, bidirectional."""

import numpy as np
import pytest

from audioplc.conceal import (
    StreamingConcealer,
    conceal_bidirectional,
    conceal_sequence,
    conceal_step,
    initial_state,
)
from audioplc.framing import AudioSignal, frame_signal
from audioplc.nn.layers import init_stacked


def hold_last_cell(frame, state):
    """Oracle cell predicting next = current; state unused."""
    return frame, state


@pytest.fixture
def cell():
    return init_stacked(4, (6, 5), (4,), np.random.default_rng(42))


class TestConcealStep:
    def test_received_frame_passes_through(self, cell):
        rng = np.random.default_rng(0)
        x = rng.uniform(-1, 1, 4)
        state = initial_state(cell)
        state.pending = rng.uniform(-1, 1, 4)  # must be ignored when received
        out, _ = conceal_step(cell, x, 1, state)
        np.testing.assert_array_equal(out, x)

    def test_lost_frame_uses_pending_prediction(self, cell):
        state = initial_state(cell)
        pending = np.array([0.1, 0.2, 0.3, 0.4])
        state.pending = pending
        out, _ = conceal_step(cell, np.zeros(4), 0, state)
        np.testing.assert_array_equal(out, pending)

    def test_hand_trace_identity_cell(self):
        # R(y, s) = (y, s): frames [a, lost] conceal to [a, a]
        a = np.array([0.5, -0.5])
        state = initial_state(hold_last_cell, frame_len=2)
        out1, state = conceal_step(hold_last_cell, a, 1, state)
        out2, state = conceal_step(hold_last_cell, np.zeros(2), 0, state)
        np.testing.assert_array_equal(out1, a)
        np.testing.assert_array_equal(out2, a)

    def test_bad_flag_rejected(self, cell):
        with pytest.raises(ValueError, match="mask flag"):
            conceal_step(cell, np.zeros(4), 2, initial_state(cell))

    def test_dimension_mismatch_rejected(self, cell):
        with pytest.raises(ValueError, match="frame shape"):
            conceal_step(cell, np.zeros(7), 1, initial_state(cell))


class TestConcealSequence:
    def test_all_received_is_identity_for_any_model(self, cell):
        rng = np.random.default_rng(1)
        frames = rng.uniform(-1, 1, (10, 4))
        out = conceal_sequence(cell, frames, np.ones(10, dtype=int))
        np.testing.assert_array_equal(out, frames)

    def test_leading_loss_yields_zero_default_response(self, cell):
        frames = np.random.default_rng(2).uniform(-1, 1, (3, 4))
        lossy = frames.copy()
        lossy[0] = 0.0
        out = conceal_sequence(cell, lossy, [0, 1, 1])
        np.testing.assert_array_equal(out[0], np.zeros(4))

    def test_hold_last_trace(self):
        # frames [a, b, lost, lost, c] with mask [1,1,0,0,1] -> [a, b, b, b, c]
        a, b, c = (np.full(2, v) for v in (0.1, 0.2, 0.3))
        frames = np.stack([a, b, np.zeros(2), np.zeros(2), c])
        out = conceal_sequence(hold_last_cell, frames, [1, 1, 0, 0, 1])
        np.testing.assert_array_equal(out, np.stack([a, b, b, b, c]))

    def test_received_frames_preserved_bitexact(self, cell):
        rng = np.random.default_rng(3)
        frames = rng.uniform(-1, 1, (20, 4))
        mask = rng.integers(0, 2, 20)
        lossy = frames * mask[:, None]
        out = conceal_sequence(cell, lossy, mask)
        for t in range(20):
            if mask[t] == 1:
                np.testing.assert_array_equal(out[t], frames[t])

    def test_causality(self, cell):
        rng = np.random.default_rng(4)
        frames = rng.uniform(-1, 1, (12, 4))
        mask = np.array([1, 1, 0, 1, 0, 0, 1, 1, 1, 0, 1, 1])
        out_a = conceal_sequence(cell, frames, mask)
        mutated = frames.copy()
        mutated[8:] = rng.uniform(-1, 1, (4, 4))
        out_b = conceal_sequence(cell, mutated, mask)
        np.testing.assert_array_equal(out_a[:8], out_b[:8])

    def test_all_lost_free_runs_bounded(self, cell):
        out = conceal_sequence(cell, np.zeros((15, 4)), np.zeros(15, dtype=int))
        assert np.all(np.isfinite(out))
        assert np.all(np.abs(out) <= 1.0)

    def test_deterministic(self, cell):
        rng = np.random.default_rng(5)
        frames = rng.uniform(-1, 1, (8, 4))
        mask = np.array([1, 0, 1, 0, 1, 1, 0, 1])
        np.testing.assert_array_equal(
            conceal_sequence(cell, frames, mask),
            conceal_sequence(cell, frames, mask),
        )

    def test_mask_length_mismatch_rejected(self, cell):
        with pytest.raises(ValueError, match="mask length"):
            conceal_sequence(cell, np.zeros((4, 4)), [1, 1])


class TestStreaming:
    def test_stream_equals_batch(self, cell):
        rng = np.random.default_rng(6)
        frames = rng.uniform(-1, 1, (16, 4))
        mask = rng.integers(0, 2, 16)
        mask[0] = 1
        batch = conceal_sequence(cell, frames * mask[:, None], mask)

        stream = StreamingConcealer(cell)
        streamed = np.stack(
            [stream.step(f * m, int(m)) for f, m in zip(frames, mask)]
        )
        np.testing.assert_array_equal(batch, streamed)

    def test_reset_restarts_state(self, cell):
        rng = np.random.default_rng(7)
        frames = rng.uniform(-1, 1, (5, 4))
        stream = StreamingConcealer(cell)
        first = [stream.step(f, 1).copy() for f in frames]
        stream.reset()
        second = [stream.step(f, 1).copy() for f in frames]
        for a, b in zip(first, second):
            np.testing.assert_array_equal(a, b)


class TestBidirectional:
    def test_all_received_identity(self, cell):
        cell_bwd = init_stacked(4, (6, 5), (4,), np.random.default_rng(43))
        rng = np.random.default_rng(8)
        frames = rng.uniform(-1, 1, (9, 4))
        out = conceal_bidirectional(cell, cell_bwd, frames, np.ones(9, dtype=int))
        np.testing.assert_array_equal(out, frames)

    def test_average_of_both_passes(self, cell):
        cell_bwd = init_stacked(4, (6, 5), (4,), np.random.default_rng(44))
        rng = np.random.default_rng(9)
        frames = rng.uniform(-1, 1, (7, 4))
        mask = np.array([1, 1, 0, 1, 0, 1, 1])
        lossy = frames * mask[:, None]

        fwd = conceal_sequence(cell, lossy, mask)
        bwd = conceal_sequence(cell_bwd, lossy[::-1, ::-1], mask[::-1])[::-1, ::-1]
        out = conceal_bidirectional(cell, cell_bwd, lossy, mask)
        np.testing.assert_allclose(out, 0.5 * (fwd + bwd), atol=1e-12)

    def test_palindrome_with_shared_model_is_symmetric(self, cell):
        rng = np.random.default_rng(10)
        half = rng.uniform(-1, 1, 14)
        samples = np.concatenate([half, half[::-1]])  # palindrome, 28 samples
        frames = frame_signal(AudioSignal(samples, 16000), 4).frames
        mask = np.array([1, 0, 1, 1, 1, 0, 1])  # symmetric under reversal
        lossy = frames * mask[:, None]
        out = conceal_bidirectional(cell, cell, lossy, mask).reshape(-1)
        np.testing.assert_allclose(out, out[::-1], atol=1e-12)
