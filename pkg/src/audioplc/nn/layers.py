"""Recurrent substrate: LSTM cells, dense heads and the stacked predictor cell.

All step functions are written against the type-generic helpers in
:mod:`audioplc.nn.tape`, so the same code runs tape-free on plain numpy
arrays (inference) or on ``Tensor`` nodes (training with gradients).

Gate layout inside the fused weight matrices is (input, forget, candidate,
output), each block ``hidden`` rows tall.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .tape import Tensor, sigmoid, tanh

GATE_ORDER = ("input", "forget", "candidate", "output")
ACTIVATIONS = ("tanh", "linear")


@dataclass
class LstmParams:
    """One LSTM cell: fused gate weights for input and recurrent paths.

    w_in is (4H, D), w_rec is (4H, H), bias is (4H,).
    """

    w_in: np.ndarray
    w_rec: np.ndarray
    bias: np.ndarray

    @property
    def hidden(self) -> int:
        return self.w_rec.shape[1]

    @property
    def input_dim(self) -> int:
        return self.w_in.shape[1]

    def validate(self) -> None:
        h, d = self.hidden, self.input_dim
        if h < 1 or d < 1:
            raise ValueError(f"LSTM dims must be >= 1, got H={h} D={d}")
        if self.w_in.shape != (4 * h, d):
            raise ValueError(f"w_in shape {self.w_in.shape} != {(4 * h, d)}")
        if self.w_rec.shape != (4 * h, h):
            raise ValueError(f"w_rec shape {self.w_rec.shape} != {(4 * h, h)}")
        if self.bias.shape != (4 * h,):
            raise ValueError(f"bias shape {self.bias.shape} != {(4 * h,)}")


@dataclass
class LstmState:
    """Recurrent state of one cell: hidden output h and memory c, both (H,)."""

    h: np.ndarray
    c: np.ndarray

    @classmethod
    def zeros(cls, hidden: int) -> "LstmState":
        return cls(np.zeros(hidden), np.zeros(hidden))


@dataclass
class DenseParams:
    """Fully connected layer: weight (out, in), bias (out,), activation tag."""

    weight: np.ndarray
    bias: np.ndarray
    activation: str = "linear"

    def validate(self) -> None:
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")
        if self.weight.ndim != 2 or self.bias.shape != (self.weight.shape[0],):
            raise ValueError(
                f"dense shapes inconsistent: weight {self.weight.shape}, "
                f"bias {self.bias.shape}"
            )


@dataclass
class StackedCellParams:
    """The stacked predictor cell: LSTM layers feeding a dense head.

    The dense head runs on the top LSTM output at every time step; its final
    layer width is the frame length being predicted.
    """

    lstm: list[LstmParams]
    dense: list[DenseParams]

    @property
    def frame_len(self) -> int:
        return self.dense[-1].weight.shape[0]

    def zero_states(self) -> list[LstmState]:
        return [LstmState.zeros(l.hidden) for l in self.lstm]

    def validate(self) -> None:
        if not self.lstm or not self.dense:
            raise ValueError("stacked cell needs at least one LSTM and one dense layer")
        for l in self.lstm:
            l.validate()
        for d in self.dense:
            d.validate()
        widths = [self.lstm[0].input_dim]
        for l in self.lstm:
            widths.append(l.hidden)
        for d in self.dense:
            widths.append(d.weight.shape[0])
        ins = [l.input_dim for l in self.lstm] + [d.weight.shape[1] for d in self.dense]
        for expected, got in zip(widths[:-1], ins):
            if expected != got:
                raise ValueError(
                    f"layer width mismatch: output {expected} feeds input {got}"
                )


def lstm_step(params: LstmParams, x, state: LstmState):
    """One LSTM time step.

    Returns (output, next_state) where output is the new hidden vector h'.
    Gates: i, f, o = sigmoid, candidate g = tanh, c' = f*c + i*g,
    h' = o * tanh(c').
    """
    h = params.hidden
    xv = x.value if isinstance(x, Tensor) else np.asarray(x)
    if xv.shape != (params.input_dim,):
        raise ValueError(
            f"lstm_step input shape {xv.shape} != ({params.input_dim},)"
        )
    hv = state.h.value if isinstance(state.h, Tensor) else np.asarray(state.h)
    if hv.shape != (h,):
        raise ValueError(f"lstm_step state shape {hv.shape} != ({h},)")

    gates = params.w_in @ x + params.w_rec @ state.h + params.bias
    i = sigmoid(gates[0 * h:1 * h])
    f = sigmoid(gates[1 * h:2 * h])
    g = tanh(gates[2 * h:3 * h])
    o = sigmoid(gates[3 * h:4 * h])
    c_new = f * state.c + i * g
    h_new = o * tanh(c_new)
    return h_new, LstmState(h_new, c_new)


def dense_forward(params: DenseParams, x):
    """activation(W @ x + b)."""
    xv = x.value if isinstance(x, Tensor) else np.asarray(x)
    if xv.shape != (params.weight.shape[1],):
        raise ValueError(
            f"dense input shape {xv.shape} != ({params.weight.shape[1]},)"
        )
    out = params.weight @ x + params.bias
    if params.activation == "tanh":
        out = tanh(out)
    return out


def stacked_step(
    params: StackedCellParams,
    frame,
    states: Sequence[LstmState],
    layer_masks: Sequence[np.ndarray] | None = None,
):
    """One step of the full predictor: frame in, predicted next frame out.

    ``layer_masks``, when given, multiplies each LSTM layer's output (dropout
    masks during training; one mask per LSTM layer).
    """
    if len(states) != len(params.lstm):
        raise ValueError(
            f"expected {len(params.lstm)} layer states, got {len(states)}"
        )
    if layer_masks is not None and len(layer_masks) != len(params.lstm):
        raise ValueError(
            f"expected {len(params.lstm)} layer masks, got {len(layer_masks)}"
        )
    x = frame
    next_states = []
    for k, cell in enumerate(params.lstm):
        x, st = lstm_step(cell, x, states[k])
        if layer_masks is not None:
            x = x * layer_masks[k]
        next_states.append(st)
    for d in params.dense:
        x = dense_forward(d, x)
    return x, next_states


def dropout_mask(rate: float, dim: int, rng) -> np.ndarray:
    """Inverted-dropout mask of {0, 1/(1-rate)} so inference needs no rescale.

    ``rng`` may be a seed or a numpy Generator.
    """
    if not 0.0 <= rate < 1.0:
        raise ValueError(f"dropout rate must be in [0, 1), got {rate}")
    if rate == 0.0:
        return np.ones(dim)
    rng = np.random.default_rng(rng)
    keep = rng.random(dim) >= rate
    return keep / (1.0 - rate)


# -- initialization ----------------------------------------------------------


def init_lstm(input_dim: int, hidden: int, rng) -> LstmParams:
    """Uniform(-k, k) weights with k = 1/sqrt(hidden); forget bias 1."""
    rng = np.random.default_rng(rng)
    k = 1.0 / np.sqrt(hidden)
    bias = np.zeros(4 * hidden)
    bias[hidden:2 * hidden] = 1.0
    return LstmParams(
        w_in=rng.uniform(-k, k, (4 * hidden, input_dim)),
        w_rec=rng.uniform(-k, k, (4 * hidden, hidden)),
        bias=bias,
    )


def init_dense(input_dim: int, out_dim: int, activation: str, rng) -> DenseParams:
    rng = np.random.default_rng(rng)
    k = 1.0 / np.sqrt(input_dim)
    return DenseParams(
        weight=rng.uniform(-k, k, (out_dim, input_dim)),
        bias=np.zeros(out_dim),
        activation=activation,
    )


def init_stacked(
    frame_len: int,
    lstm_units: Sequence[int],
    dense_units: Sequence[int],
    rng,
) -> StackedCellParams:
    """Build a predictor cell; the last dense layer must equal frame_len."""
    if dense_units[-1] != frame_len:
        raise ValueError(
            f"final dense width {dense_units[-1]} must equal frame_len {frame_len}"
        )
    rng = np.random.default_rng(rng)
    lstm = []
    width = frame_len
    for units in lstm_units:
        lstm.append(init_lstm(width, units, rng))
        width = units
    dense = []
    for units in dense_units:
        dense.append(init_dense(width, units, "tanh", rng))
        width = units
    cell = StackedCellParams(lstm=lstm, dense=dense)
    cell.validate()
    return cell


# -- parameter traversal (training, checkpoints) -----------------------------


def named_params(cell: StackedCellParams) -> list[tuple[str, np.ndarray]]:
    """Flat, stable (name, array) listing of every trainable tensor."""
    out = []
    for i, l in enumerate(cell.lstm):
        out.append((f"lstm{i}.w_in", l.w_in))
        out.append((f"lstm{i}.w_rec", l.w_rec))
        out.append((f"lstm{i}.bias", l.bias))
    for j, d in enumerate(cell.dense):
        out.append((f"dense{j}.weight", d.weight))
        out.append((f"dense{j}.bias", d.bias))
    return out


def map_params(cell: StackedCellParams, fn: Callable) -> StackedCellParams:
    """Structure-preserving map over every parameter array."""
    lstm = [
        replace(l, w_in=fn(l.w_in), w_rec=fn(l.w_rec), bias=fn(l.bias))
        for l in cell.lstm
    ]
    dense = [
        replace(d, weight=fn(d.weight), bias=fn(d.bias)) for d in cell.dense
    ]
    return StackedCellParams(lstm=lstm, dense=dense)


def lift_params(cell: StackedCellParams) -> StackedCellParams:
    """Wrap every array as a gradient-tracking Tensor leaf."""
    return map_params(cell, lambda a: Tensor(a, requires_grad=True))
