"""Adam training loop with early stopping on validation F1."""

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import NonFiniteLoss
from ..evaluate import prf1
from ..features import ContextBundle, bundles_for
from .model import NeuralModel


@dataclass
class TrainConfig:
    learning_rate: float = 0.001
    batch_size: int = 64
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    patience: int = 3
    max_epochs: int = 50
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0 or self.batch_size <= 0 or self.max_epochs <= 0:
            raise ValueError("rates and sizes must be positive")


@dataclass
class TrainHistory:
    train_loss: list[float] = field(default_factory=list)
    val_f1: list[float] = field(default_factory=list)
    best_epoch: int = -1
    best_val_f1: float = -1.0
    stopped_early: bool = False

    @property
    def epochs_run(self) -> int:
        return len(self.val_f1)


class Adam:
    def __init__(self, params: dict[str, np.ndarray], config: TrainConfig):
        self.config = config
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}
        self.t = 0

    def step(self, params: dict[str, np.ndarray], grads: dict[str, np.ndarray]) -> None:
        c = self.config
        self.t += 1
        correct1 = 1.0 - c.beta1**self.t
        correct2 = 1.0 - c.beta2**self.t
        for name in sorted(params):
            g = grads[name]
            self.m[name] = c.beta1 * self.m[name] + (1 - c.beta1) * g
            self.v[name] = c.beta2 * self.v[name] + (1 - c.beta2) * (g * g)
            m_hat = self.m[name] / correct1
            v_hat = self.v[name] / correct2
            params[name] -= c.learning_rate * m_hat / (np.sqrt(v_hat) + c.eps)


def _snapshot(params: dict[str, np.ndarray]) -> dict[str, np.ndarray]:
    return {k: v.copy() for k, v in params.items()}


def evaluate_f1(
    model: NeuralModel,
    bundles: list[ContextBundle],
    labels,
    contextual: bool | None = None,
    threshold: float = 0.5,
) -> float:
    probs = model.predict_proba(bundles, contextual)
    return prf1(probs >= threshold, labels).f1


def train(
    model: NeuralModel,
    config: TrainConfig,
    train_sentences,
    valid_sentences,
    contextual: bool | None = None,
) -> TrainHistory:
    """Adam over shuffled minibatches; stops when validation F1 has not
    improved for ``patience`` epochs and restores the best-epoch weights.

    Accepts lists of LabeledSentence (bundles are assembled here) or
    pre-built ContextBundle lists.
    """
    if not train_sentences or not valid_sentences:
        raise ValueError("need non-empty train and validation sets")
    if isinstance(train_sentences[0], ContextBundle):
        train_bundles = list(train_sentences)
        valid_bundles = list(valid_sentences)
    else:
        train_bundles = bundles_for(train_sentences)
        valid_bundles = bundles_for(valid_sentences)
    train_labels = [int(b.cur_sentence.label) for b in train_bundles]
    valid_labels = [int(b.cur_sentence.label) for b in valid_bundles]

    optimizer = Adam(model.params, config)
    rng = np.random.default_rng(config.seed)
    history = TrainHistory()
    best_params = _snapshot(model.params)
    since_best = 0

    for _epoch in range(config.max_epochs):
        order = rng.permutation(len(train_bundles))
        epoch_loss = 0.0
        n_batches = 0
        for start in range(0, len(order), config.batch_size):
            batch_idx = order[start : start + config.batch_size]
            batch = [train_bundles[i] for i in batch_idx]
            labels = [train_labels[i] for i in batch_idx]
            value, grads = model.loss_and_grads(
                batch, labels, contextual, train_mode=True, dropout_rng=rng
            )
            if not math.isfinite(value):
                model.params = best_params
                raise NonFiniteLoss(f"loss diverged at epoch {history.epochs_run}")
            optimizer.step(model.params, grads)
            epoch_loss += value
            n_batches += 1
        history.train_loss.append(epoch_loss / max(n_batches, 1))
        f1 = evaluate_f1(model, valid_bundles, valid_labels, contextual)
        history.val_f1.append(f1)
        if f1 > history.best_val_f1:
            history.best_val_f1 = f1
            history.best_epoch = history.epochs_run - 1
            best_params = _snapshot(model.params)
            since_best = 0
        else:
            since_best += 1
            if since_best >= config.patience:
                history.stopped_early = True
                break

    model.params = best_params
    return history
