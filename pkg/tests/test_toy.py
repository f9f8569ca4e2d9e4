"""The bundled square-vs-background dataset and model builder."""

import numpy as np

from lucidbox.engine.model import model_forward
from lucidbox.toy import (
    CLASS_BACKGROUND,
    CLASS_SQUARE,
    SQUARE_SIDE,
    build_untrained_model,
    make_examples,
    train_toy_model,
)


def test_examples_alternate_classes_with_even_offsets():
    rng = np.random.default_rng(500)
    x, y, offsets = make_examples(30, rng)
    assert x.shape == (30, 28, 28, 1)
    assert y.shape == (30, 2)
    for i in range(30):
        if i % 2 == 0:
            r, c = offsets[i]
            assert r % 2 == 0 and c % 2 == 0
            assert 0 <= r <= 20 and 0 <= c <= 20
            patch = x[i, r:r + SQUARE_SIDE, c:c + SQUARE_SIDE, 0]
            assert patch.min() >= 0.85
            assert y[i, CLASS_SQUARE] == 1.0
        else:
            assert offsets[i] is None
            assert x[i].max() <= 0.5
            assert y[i, CLASS_BACKGROUND] == 1.0


def test_untrained_model_forward_works():
    rng = np.random.default_rng(501)
    model = build_untrained_model(rng)
    x, _, _ = make_examples(4, rng)
    probs, _, _ = model_forward(model, x)
    np.testing.assert_allclose(probs.sum(axis=1), np.ones(4), atol=1e-9)


def test_training_is_deterministic_for_fixed_seed():
    a, _, _, acc_a = train_toy_model(seed=3, train_size=24, epochs=2)
    b, _, _, acc_b = train_toy_model(seed=3, train_size=24, epochs=2)
    assert acc_a == acc_b
    for name in a.weights:
        assert np.array_equal(a.weights[name], b.weights[name])
