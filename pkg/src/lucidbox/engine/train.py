"""Minimal SGD training so desk-scale models can be built inside the repo."""

from __future__ import annotations

import numpy as np

from ..errors import ShapeError, ValidationError
from .model import Model, backward_from_logits, model_forward, with_weights


def cross_entropy_from_logits(logits: np.ndarray, targets: np.ndarray) -> float:
    """Mean cross-entropy, computed in log-space for stability."""
    z = logits - logits.max(axis=1, keepdims=True)
    log_probs = z - np.log(np.exp(z).sum(axis=1, keepdims=True))
    return float(-np.mean(np.sum(targets * log_probs, axis=1)))


def loss_and_weight_gradients(model: Model, inputs, targets: np.ndarray
                              ) -> tuple[float, dict[str, np.ndarray]]:
    probs, logits, trace = model_forward(model, inputs)
    if targets.shape != probs.shape:
        raise ShapeError(f"targets shape {targets.shape} != probabilities "
                         f"shape {probs.shape}")
    loss = cross_entropy_from_logits(logits, targets)
    grad_logits = (probs - targets) / probs.shape[0]
    _, weight_grads = backward_from_logits(model, trace, grad_logits,
                                           want_weight_grads=True)
    return loss, weight_grads


def train_step(model: Model, batch: tuple, learning_rate: float
               ) -> tuple[Model, float]:
    """One SGD step: w <- w - lr * dloss/dw. Returns (new model, batch loss)."""
    if learning_rate < 0:
        raise ValidationError(f"learning_rate must be >= 0, got {learning_rate}")
    inputs, targets = batch
    targets = np.asarray(targets, dtype=np.float64)
    loss, grads = loss_and_weight_gradients(model, inputs, targets)
    new_weights = {name: (w - learning_rate * grads[name] if name in grads else w)
                   for name, w in model.weights.items()}
    return with_weights(model, new_weights), loss
