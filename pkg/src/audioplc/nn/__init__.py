"""Recurrent-network substrate: tape autodiff, LSTM/dense layers, dropout."""

from .tape import Tensor, backward, concat, concatenate, lift, mean, sigmoid, tanh, total
from .layers import (
    ACTIVATIONS,
    GATE_ORDER,
    DenseParams,
    LstmParams,
    LstmState,
    StackedCellParams,
    dense_forward,
    dropout_mask,
    init_dense,
    init_lstm,
    init_stacked,
    lift_params,
    lstm_step,
    map_params,
    named_params,
    stacked_step,
)

__all__ = [
    "ACTIVATIONS",
    "GATE_ORDER",
    "DenseParams",
    "LstmParams",
    "LstmState",
    "StackedCellParams",
    "Tensor",
    "backward",
    "concat",
    "concatenate",
    "dense_forward",
    "dropout_mask",
    "init_dense",
    "init_lstm",
    "init_stacked",
    "lift",
    "lift_params",
    "lstm_step",
    "map_params",
    "mean",
    "named_params",
    "sigmoid",
    "stacked_step",
    "tanh",
    "total",
]
