"""Attention-based BiLSTM classifier, training and gradient verification."""

from .attention import (
    VARIANTS,
    attention_pool,
    attention_pool_backward,
    score_cos,
    score_dp,
    score_sdp,
    softmax,
)
from .gradcheck import GradCheckReport, grad_check, numeric_grad, relative_error
from .lstm import (
    bilstm_backward,
    bilstm_forward,
    init_lstm_params,
    lstm_backward,
    lstm_forward,
    lstm_step,
)
from .model import NeuralConfig, NeuralModel
from .training import Adam, TrainConfig, TrainHistory, evaluate_f1, train

__all__ = [
    "Adam",
    "GradCheckReport",
    "NeuralConfig",
    "NeuralModel",
    "TrainConfig",
    "TrainHistory",
    "VARIANTS",
    "attention_pool",
    "attention_pool_backward",
    "bilstm_backward",
    "bilstm_forward",
    "evaluate_f1",
    "grad_check",
    "init_lstm_params",
    "lstm_backward",
    "lstm_forward",
    "lstm_step",
    "numeric_grad",
    "relative_error",
    "score_cos",
    "score_dp",
    "score_sdp",
    "softmax",
    "train",
]
