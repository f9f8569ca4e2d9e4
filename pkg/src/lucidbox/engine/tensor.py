"""Dense tensor conventions and validators.

Tensors are C-contiguous float64 numpy arrays; image batches are laid out
N x H x W x C (NHWC, row-major), which matches PNG row order and makes
occlusion window indexing direct. Arrays that must stay immutable (model
weights, traced activations) are frozen via ``freeze``.
"""

from __future__ import annotations

import numpy as np

from ..errors import ShapeError, ValidationError


def as_tensor(data, shape: tuple[int, ...] | None = None) -> np.ndarray:
    """Coerce to a C-contiguous float64 array, optionally checking the shape."""
    arr = np.ascontiguousarray(data, dtype=np.float64)
    if shape is not None and arr.shape != tuple(shape):
        raise ShapeError(f"expected shape {tuple(shape)}, got {arr.shape}")
    return arr


def freeze(arr: np.ndarray) -> np.ndarray:
    """Mark an array read-only (shared tensors are immutable by contract)."""
    arr.flags.writeable = False
    return arr


def check_finite(arr: np.ndarray, context: str) -> np.ndarray:
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"non-finite values in {context}")
    return arr


def require_rank(arr: np.ndarray, rank: int, name: str) -> None:
    if arr.ndim != rank:
        raise ShapeError(f"{name} must have rank {rank}, got rank {arr.ndim} "
                         f"(shape {arr.shape})")


def one_hot(indices, class_count: int) -> np.ndarray:
    """Integer labels -> one-hot rows, float64."""
    idx = np.asarray(indices, dtype=np.int64)
    if idx.ndim != 1:
        raise ShapeError(f"labels must be a vector, got shape {idx.shape}")
    if idx.size and (idx.min() < 0 or idx.max() >= class_count):
        raise ValidationError(f"label index out of range [0, {class_count})")
    out = np.zeros((idx.size, class_count), dtype=np.float64)
    out[np.arange(idx.size), idx] = 1.0
    return out
