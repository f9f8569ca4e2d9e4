"""Bundled desk-scale classifier: bright square vs. plain textured background.

A 2-class analogue of the classic proxy-feature pitfall, small enough to
train in seconds inside the test suite. Class "square" images contain a
bright 8x8 patch at a random even offset on a noisy background; class
"background" images are noise only. Even offsets keep the patch alignable
with an 8-pixel occlusion window on a stride-2 grid, so occluding the
patch exactly is always possible.
"""

from __future__ import annotations

import numpy as np

from .engine import model as M
from .engine.tensor import one_hot
from .engine.train import train_step
from .modelio.labels import LabelTable
from .modelio.preprocess import PreprocessSpec

IMAGE_SIDE = 28
SQUARE_SIDE = 8
CLASS_SQUARE = 0
CLASS_BACKGROUND = 1
LABELS = ("square", "background")

BACKGROUND_LOW, BACKGROUND_HIGH = 0.0, 0.5
SQUARE_LOW, SQUARE_HIGH = 0.85, 1.0


def make_examples(n: int, rng: np.random.Generator
                  ) -> tuple[np.ndarray, np.ndarray, list[tuple[int, int] | None]]:
    """n images, alternating classes; returns (inputs, one-hot labels, offsets).

    offsets[i] is the (row, col) of the bright square, or None for
    background-only images.
    """
    x = rng.uniform(BACKGROUND_LOW, BACKGROUND_HIGH,
                    size=(n, IMAGE_SIDE, IMAGE_SIDE, 1))
    labels = np.zeros(n, dtype=np.int64)
    offsets: list[tuple[int, int] | None] = []
    max_offset = (IMAGE_SIDE - SQUARE_SIDE) // 2  # even placements only
    for i in range(n):
        if i % 2 == 0:
            r = 2 * int(rng.integers(0, max_offset + 1))
            c = 2 * int(rng.integers(0, max_offset + 1))
            x[i, r:r + SQUARE_SIDE, c:c + SQUARE_SIDE, 0] = rng.uniform(
                SQUARE_LOW, SQUARE_HIGH, size=(SQUARE_SIDE, SQUARE_SIDE))
            labels[i] = CLASS_SQUARE
            offsets.append((r, c))
        else:
            labels[i] = CLASS_BACKGROUND
            offsets.append(None)
    return x, one_hot(labels, 2), offsets


def build_untrained_model(rng: np.random.Generator) -> M.Model:
    """conv 5x5x1x4 -> relu -> maxpool 4/4 -> flatten -> dense -> softmax."""
    conv_out = IMAGE_SIDE - 5 + 1            # 24
    pooled = (conv_out - 4) // 4 + 1         # 6
    flat = pooled * pooled * 4               # 144
    layers = [
        M.conv2d((5, 5), 1, 4, kernel_name="conv.kernel", bias_name="conv.bias"),
        M.relu(),
        M.maxpool2d(4, 4),
        M.flatten(),
        M.dense(flat, 2, kernel_name="fc.kernel", bias_name="fc.bias"),
        M.softmax_out(),
    ]
    weights = {
        "conv.kernel": rng.standard_normal((5, 5, 1, 4)) / 5.0,
        "conv.bias": np.zeros(4),
        "fc.kernel": rng.standard_normal((flat, 2)) / np.sqrt(flat),
        "fc.bias": np.zeros(2),
    }
    return M.build_model(layers, weights, (IMAGE_SIDE, IMAGE_SIDE, 1), 2)


def train_accuracy(model: M.Model, x: np.ndarray, y: np.ndarray) -> float:
    probs, _, _ = M.model_forward(model, x)
    return float(np.mean(probs.argmax(axis=1) == y.argmax(axis=1)))


def train_toy_model(seed: int = 7, train_size: int = 240, epochs: int = 30,
                    batch_size: int = 24, learning_rate: float = 0.35
                    ) -> tuple[M.Model, LabelTable, PreprocessSpec, float]:
    """Train the bundled model; returns (model, labels, preprocess, accuracy)."""
    rng = np.random.default_rng(seed)
    x, y, _ = make_examples(train_size, rng)
    model = build_untrained_model(rng)
    order = np.arange(train_size)
    for _ in range(epochs):
        rng.shuffle(order)
        for start in range(0, train_size, batch_size):
            idx = order[start:start + batch_size]
            model, _ = train_step(model, (x[idx], y[idx]), learning_rate)
    accuracy = train_accuracy(model, x, y)
    labels = LabelTable(LABELS)
    preprocess = PreprocessSpec(height=IMAGE_SIDE, width=IMAGE_SIDE,
                                channel_mode="grayscale", resize="nearest",
                                scaling="unit")
    return model, labels, preprocess, accuracy
