"""Shared oracles and the desk-scale trained models used across test modules."""

from __future__ import annotations

import time
from types import SimpleNamespace

import numpy as np
import pytest

from audioplc.framing import AudioSignal
from audioplc.generator import GeneratorConfig
from audioplc.synth import sine_corpus
from audioplc.training import TrainConfig, train

GRAD_TOL = 1e-5
FD_STEP = 1e-4


def finite_diff(loss_fn, array: np.ndarray, h: float = FD_STEP) -> np.ndarray:
    """Central finite differences of a scalar function w.r.t. one array.

    The function is re-evaluated with the array mutated in place; this stays
    independent of the tape it is checking.
    """
    grad = np.zeros_like(array)
    it = np.nditer(array, flags=["multi_index"])
    for _ in it:
        idx = it.multi_index
        orig = array[idx]
        array[idx] = orig + h
        lp = loss_fn()
        array[idx] = orig - h
        lm = loss_fn()
        array[idx] = orig
        grad[idx] = (lp - lm) / (2 * h)
    return grad


def max_rel_err(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-6) -> float:
    """Worst elementwise relative error, floored so that near-zero gradients
    (where float64 finite differences are all round-off) do not dominate."""
    analytic = np.asarray(analytic, dtype=np.float64)
    numeric = np.asarray(numeric, dtype=np.float64)
    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)
    return float(np.max(np.abs(analytic - numeric) / denom))


# -- desk-scale training setup (acceptance criteria 6-8) ----------------------

TINY_GEN = dict(frame_len=100, lstm_units=(32, 32), dense_units=(32, 100))
TINY_TRAIN = dict(
    lr_plain=0.0045,
    lr_stress=0.003,
    lr_decay=0.0015,
    dropout_rate=0.5,
    segment_seconds=2.0,
    stress_depth=3,
    rng_seed=1,
)
CORPUS_SEED = 100
HELDOUT_SEED = 999


@pytest.fixture(scope="session")
def desk_models():
    """Train the tiny models once per session: 4 tracks x 2 s, 4 segments per
    epoch, so the step counts are plain=120, stress=60+60, backward=80."""
    corpus = sine_corpus(4, 2.0, seed=CORPUS_SEED)
    heldout = sine_corpus(2, 1.0, seed=HELDOUT_SEED)
    gen_cfg = GeneratorConfig(**TINY_GEN)

    cfg_plain = TrainConfig(epochs_plain=30, epochs_stress=0, **TINY_TRAIN)
    cfg_stress = TrainConfig(epochs_plain=15, epochs_stress=15, **TINY_TRAIN)
    cfg_bwd = TrainConfig(epochs_plain=20, epochs_stress=0, **TINY_TRAIN)

    t0 = time.perf_counter()
    plain, hist_plain = train(corpus, gen_cfg, cfg_plain)
    t1 = time.perf_counter()
    stress, hist_stress = train(corpus, gen_cfg, cfg_stress)
    t2 = time.perf_counter()
    reversed_corpus = [
        AudioSignal(t.samples[::-1].copy(), t.sample_rate) for t in corpus
    ]
    backward, _ = train(reversed_corpus, gen_cfg, cfg_bwd)
    t3 = time.perf_counter()

    return SimpleNamespace(
        corpus=corpus,
        heldout=heldout,
        gen_cfg=gen_cfg,
        cfg_plain=cfg_plain,
        cfg_stress=cfg_stress,
        plain=plain,
        stress=stress,
        backward=backward,
        hist_plain=hist_plain,
        hist_stress=hist_stress,
        train_seconds=dict(plain=t1 - t0, stress=t2 - t1, backward=t3 - t2),
    )
