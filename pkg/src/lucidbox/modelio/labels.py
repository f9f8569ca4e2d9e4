"""Class-label table and prediction decoding."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..errors import ValidationError


class LabelTable:
    """Ordered, unique human-readable class labels."""

    def __init__(self, labels):
        self.labels = tuple(str(s) for s in labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError("labels must be unique")
        if not self.labels:
            raise ValidationError("label table is empty")

    def __len__(self):
        return len(self.labels)

    def __getitem__(self, index: int) -> str:
        return self.labels[index]

    @classmethod
    def from_file(cls, path) -> "LabelTable":
        """One label per line, UTF-8; blank lines ignored."""
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        return cls([ln.strip() for ln in lines if ln.strip()])

    @classmethod
    def numbered(cls, class_count: int) -> "LabelTable":
        """Fallback when a checkpoint embeds no labels."""
        return cls([f"class {i}" for i in range(class_count)])


def top_k(probabilities, labels: LabelTable, k: int) -> list[tuple[int, str, float]]:
    """Top-min(k, K) classes by probability, descending; ties to lower index."""
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    probs = np.asarray(probabilities, dtype=np.float64).reshape(-1)
    if probs.size != len(labels):
        raise ValidationError(f"{probs.size} probabilities for {len(labels)} labels")
    ranked = sorted(range(probs.size), key=lambda i: -probs[i])  # stable: ties keep index order
    return [(i, labels[i], float(probs[i])) for i in ranked[:min(k, probs.size)]]


def decode_predictions(probabilities, labels: LabelTable, k: int
                       ) -> list[tuple[str, float]]:
    """Human-readable (label, probability) pairs for the k most likely classes."""
    return [(label, p) for _, label, p in top_k(probabilities, labels, k)]
