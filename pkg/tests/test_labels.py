"""Label tables and prediction decoding."""

import numpy as np
import pytest

from lucidbox.errors import ValidationError
from lucidbox.modelio.labels import LabelTable, decode_predictions, top_k


def test_top_prediction():
    labels = LabelTable(["a", "b", "c"])
    assert decode_predictions(np.array([[0.1, 0.7, 0.2]]), labels, 1) == [("b", 0.7)]


def test_k_larger_than_class_count():
    labels = LabelTable(["a", "b", "c"])
    got = decode_predictions(np.array([[0.1, 0.7, 0.2]]), labels, 10)
    assert got == [("b", 0.7), ("c", 0.2), ("a", 0.1)]


def test_tie_breaks_to_lower_index():
    labels = LabelTable(["a", "b", "c"])
    got = decode_predictions(np.array([[0.4, 0.4, 0.2]]), labels, 3)
    assert got == [("a", 0.4), ("b", 0.4), ("c", 0.2)]


def test_output_is_subsequence_and_totally_ordered():
    rng = np.random.default_rng(70)
    for _ in range(25):
        k = int(rng.integers(2, 9))
        probs = rng.random(k)
        probs /= probs.sum()
        labels = LabelTable([f"c{i}" for i in range(k)])
        ranked = top_k(probs, labels, k)
        assert sorted(p for _, _, p in ranked) == sorted(probs.tolist())
        pairs = [(-p, i) for i, _, p in ranked]
        assert pairs == sorted(pairs)


def test_length_mismatch():
    with pytest.raises(ValidationError, match="labels"):
        decode_predictions(np.array([[0.5, 0.5]]), LabelTable(["a", "b", "c"]), 1)


def test_k_must_be_positive():
    with pytest.raises(ValidationError, match="k"):
        decode_predictions(np.array([[1.0]]), LabelTable(["a"]), 0)


def test_duplicate_labels_rejected():
    with pytest.raises(ValidationError, match="unique"):
        LabelTable(["a", "a"])


def test_from_file(tmp_path):
    p = tmp_path / "labels.txt"
    p.write_text("cat\ndog\n\nbird\n", encoding="utf-8")
    assert LabelTable.from_file(p).labels == ("cat", "dog", "bird")
