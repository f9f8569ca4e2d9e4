"""Forward and backward kernels for the supported layer kinds.

Each kernel is a pure function. Backward kernels take the layer's forward
input (plus recorded auxiliaries where needed) and the upstream gradient,
and return gradients in the same layout. Accumulation over kernel offsets
happens in a fixed row-major order so results do not depend on batch size.
"""

from __future__ import annotations

import numpy as np

from ..errors import ShapeError, ValidationError
from .tensor import require_rank

VALID = "valid"
SAME = "same"


def _conv_out_dim(extent: int, k: int, stride: int, padding: str) -> int:
    if padding == SAME:
        return -(-extent // stride)  # ceil
    return (extent - k) // stride + 1


def _same_pad(extent: int, k: int, stride: int) -> tuple[int, int]:
    # zero padding, asymmetric extra pad goes bottom/right
    out = -(-extent // stride)
    total = max((out - 1) * stride + k - extent, 0)
    before = total // 2
    return before, total - before


def _check_conv_args(x, kernel, bias, stride, padding):
    require_rank(x, 4, "conv2d input")
    require_rank(kernel, 4, "conv2d kernel")
    require_rank(bias, 1, "conv2d bias")
    if stride < 1:
        raise ValidationError(f"conv2d stride must be >= 1, got {stride}")
    if padding not in (VALID, SAME):
        raise ValidationError(f"conv2d padding must be 'valid' or 'same', got {padding!r}")
    kh, kw, cin, cout = kernel.shape
    if x.shape[3] != cin:
        raise ShapeError(f"conv2d input channels {x.shape[3]} != kernel in_channels {cin}")
    if bias.shape[0] != cout:
        raise ShapeError(f"conv2d bias length {bias.shape[0]} != kernel out_channels {cout}")
    if padding == VALID and (kh > x.shape[1] or kw > x.shape[2]):
        raise ShapeError(f"conv2d kernel {kh}x{kw} exceeds input {x.shape[1]}x{x.shape[2]} "
                         "with valid padding")


def _pad_input(x: np.ndarray, kh: int, kw: int, stride: int, padding: str) -> np.ndarray:
    if padding == VALID:
        return x
    top, bottom = _same_pad(x.shape[1], kh, stride)
    left, right = _same_pad(x.shape[2], kw, stride)
    if top == bottom == left == right == 0:
        return x
    return np.pad(x, ((0, 0), (top, bottom), (left, right), (0, 0)))


def conv2d_forward(x: np.ndarray, kernel: np.ndarray, bias: np.ndarray,
                   stride: int = 1, padding: str = VALID) -> np.ndarray:
    """2-D convolution (cross-correlation), NHWC in, NHWC out."""
    _check_conv_args(x, kernel, bias, stride, padding)
    kh, kw, _, cout = kernel.shape
    oh = _conv_out_dim(x.shape[1], kh, stride, padding)
    ow = _conv_out_dim(x.shape[2], kw, stride, padding)
    xp = _pad_input(x, kh, kw, stride, padding)
    out = np.zeros((x.shape[0], oh, ow, cout), dtype=np.float64)
    hi = (oh - 1) * stride + 1
    wi = (ow - 1) * stride + 1
    for i in range(kh):
        for j in range(kw):
            patch = xp[:, i:i + hi:stride, j:j + wi:stride, :]
            out += patch @ kernel[i, j]
    out += bias
    return out


def conv2d_backward(x: np.ndarray, kernel: np.ndarray, stride: int, padding: str,
                    grad_out: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradients of conv2d_forward w.r.t. input, kernel and bias."""
    kh, kw, cin, cout = kernel.shape
    xp = _pad_input(x, kh, kw, stride, padding)
    oh, ow = grad_out.shape[1], grad_out.shape[2]
    hi = (oh - 1) * stride + 1
    wi = (ow - 1) * stride + 1
    grad_kernel = np.zeros_like(kernel)
    grad_xp = np.zeros_like(xp)
    for i in range(kh):
        for j in range(kw):
            patch = xp[:, i:i + hi:stride, j:j + wi:stride, :]
            grad_kernel[i, j] = np.einsum("nhwc,nhwk->ck", patch, grad_out)
            grad_xp[:, i:i + hi:stride, j:j + wi:stride, :] += grad_out @ kernel[i, j].T
    grad_bias = grad_out.sum(axis=(0, 1, 2))
    if padding == SAME:
        top, _ = _same_pad(x.shape[1], kh, stride)
        left, _ = _same_pad(x.shape[2], kw, stride)
        grad_x = grad_xp[:, top:top + x.shape[1], left:left + x.shape[2], :]
    else:
        grad_x = grad_xp
    return np.ascontiguousarray(grad_x), grad_kernel, grad_bias


def _pool_dims(x, window, stride):
    require_rank(x, 4, "maxpool2d input")
    if window < 1 or stride < 1:
        raise ValidationError(f"maxpool2d window and stride must be >= 1, "
                              f"got window={window} stride={stride}")
    if window > x.shape[1] or window > x.shape[2]:
        raise ShapeError(f"maxpool2d window {window} exceeds input "
                         f"{x.shape[1]}x{x.shape[2]}")
    oh = (x.shape[1] - window) // stride + 1
    ow = (x.shape[2] - window) // stride + 1
    return oh, ow


def maxpool2d_forward(x: np.ndarray, window: int, stride: int) -> tuple[np.ndarray, np.ndarray]:
    """Max pooling; returns (output, argmax offsets for the backward pass).

    Argmax is np.argmax over row-major window offsets, so ties resolve to
    the first (row-major) maximal element.
    """
    oh, ow = _pool_dims(x, window, stride)
    hi = (oh - 1) * stride + 1
    wi = (ow - 1) * stride + 1
    stack = np.stack([x[:, i:i + hi:stride, j:j + wi:stride, :]
                      for i in range(window) for j in range(window)], axis=-1)
    return stack.max(axis=-1), stack.argmax(axis=-1)


def maxpool2d_backward(x_shape: tuple[int, ...], window: int, stride: int,
                       argmax: np.ndarray, grad_out: np.ndarray) -> np.ndarray:
    """Routes each output gradient to its recorded argmax position."""
    grad_x = np.zeros(x_shape, dtype=np.float64)
    oh, ow = grad_out.shape[1], grad_out.shape[2]
    hi = (oh - 1) * stride + 1
    wi = (ow - 1) * stride + 1
    for k in range(window * window):
        i, j = divmod(k, window)
        grad_x[:, i:i + hi:stride, j:j + wi:stride, :] += grad_out * (argmax == k)
    return grad_x


def dense_forward(x: np.ndarray, weight: np.ndarray, bias: np.ndarray) -> np.ndarray:
    require_rank(x, 2, "dense input")
    require_rank(weight, 2, "dense weight")
    if x.shape[1] != weight.shape[0]:
        raise ShapeError(f"dense input width {x.shape[1]} != weight rows {weight.shape[0]}")
    if bias.shape != (weight.shape[1],):
        raise ShapeError(f"dense bias shape {bias.shape} != ({weight.shape[1]},)")
    return x @ weight + bias


def dense_backward(x: np.ndarray, weight: np.ndarray,
                   grad_out: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return grad_out @ weight.T, x.T @ grad_out, grad_out.sum(axis=0)


def relu_forward(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def relu_backward(x: np.ndarray, grad_out: np.ndarray) -> np.ndarray:
    # subgradient at exactly 0 is 0
    return grad_out * (x > 0.0)


def flatten_forward(x: np.ndarray) -> np.ndarray:
    return x.reshape(x.shape[0], -1)


def flatten_backward(x_shape: tuple[int, ...], grad_out: np.ndarray) -> np.ndarray:
    return grad_out.reshape(x_shape)


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise softmax with max subtraction for stability."""
    require_rank(logits, 2, "softmax logits")
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)
