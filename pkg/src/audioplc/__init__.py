"""Packet-loss concealment for streamed audio.

A small recurrent generator is trained to predict the next audio frame; a
concealment wrapper substitutes its predictions for lost frames during
streaming inference.  Loss patterns come from a two-state Markov model, and
an evaluation harness scores concealment quality (CCC) against zero-fill
and linear-interpolation baselines.
"""

from .baselines import linear_interp, zero_fill
from .checkpoint import load_checkpoint, save_checkpoint
from .conceal import (
    ConcealState,
    StreamingConcealer,
    conceal_bidirectional,
    conceal_sequence,
    conceal_step,
    initial_state,
)
from .evaluate import (
    DEFAULT_PAIRS,
    STRATEGIES,
    EvalGridSpec,
    EvalRow,
    evaluate_track,
    evaluate_tracks,
    parse_csv,
    render_csv,
    render_table,
)
from .framing import AudioSignal, FrameSequence, frame_signal, unframe
from .generator import (
    DropoutPlan,
    GeneratorConfig,
    compose_generate,
    free_run,
    generate_sequence,
    stress_weights,
    stressed_loss,
)
from .lossmodel import (
    MarkovLossModel,
    apply_mask,
    expected_drop_rate,
    read_mask_file,
    sample_mask,
    write_mask_file,
)
from .metrics import CccComponents, ccc, ccc_components, ccc_loss
from .synth import modulated_sine, sine_corpus
from .training import Adam, EpochStats, TrainConfig, train
from .wavio import read_wav, write_wav

__version__ = "0.1.0"

__all__ = [
    "Adam",
    "AudioSignal",
    "CccComponents",
    "ConcealState",
    "DEFAULT_PAIRS",
    "DropoutPlan",
    "EpochStats",
    "EvalGridSpec",
    "EvalRow",
    "FrameSequence",
    "GeneratorConfig",
    "MarkovLossModel",
    "STRATEGIES",
    "StreamingConcealer",
    "TrainConfig",
    "apply_mask",
    "ccc",
    "ccc_components",
    "ccc_loss",
    "compose_generate",
    "conceal_bidirectional",
    "conceal_sequence",
    "conceal_step",
    "evaluate_track",
    "evaluate_tracks",
    "expected_drop_rate",
    "frame_signal",
    "free_run",
    "generate_sequence",
    "initial_state",
    "linear_interp",
    "load_checkpoint",
    "modulated_sine",
    "parse_csv",
    "read_mask_file",
    "read_wav",
    "render_csv",
    "render_table",
    "sample_mask",
    "save_checkpoint",
    "sine_corpus",
    "stress_weights",
    "stressed_loss",
    "train",
    "unframe",
    "write_mask_file",
    "write_wav",
    "zero_fill",
]
