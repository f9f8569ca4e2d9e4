"""Grayscale heatmap rendering.

Both shipped visualizations define meaning via brightness, so rendering is
deliberately grayscale-only and bit-exact: min-max normalize (degenerate
maps render black), scale to 8-bit with round-half-up, optionally
alpha-blend over the original image.
"""

from __future__ import annotations

import io

import numpy as np
from PIL import Image

from ..errors import ValidationError
from ..modelio.preprocess import decode_png


def normalize_map(raw: np.ndarray) -> np.ndarray:
    """Min-max to [0, 1]; a constant map normalizes to all zeros."""
    raw = np.asarray(raw, dtype=np.float64)
    if not np.all(np.isfinite(raw)):
        raise ValidationError("map contains non-finite values")
    lo, hi = raw.min(), raw.max()
    if hi == lo:
        return np.zeros_like(raw)
    return (raw - lo) / (hi - lo)


def upscale_cells(grid: np.ndarray, target: tuple[int, int],
                  footprint: tuple[int, int] | None = None) -> np.ndarray:
    """Nearest-neighbor upscale of a cell grid to target (H, W).

    With a footprint (the occlusion stride), cell (i, j) paints the
    stride x stride block anchored at (i*stride, j*stride); pixels past the
    last anchor block clamp to the last cell so coverage is total. Without
    a footprint, cells scale uniformly.
    """
    gh, gw = grid.shape
    th, tw = target
    if footprint is not None:
        sh, sw = footprint
        rows = np.minimum(np.arange(th) // sh, gh - 1)
        cols = np.minimum(np.arange(tw) // sw, gw - 1)
    else:
        rows = np.minimum(np.arange(th) * gh // th, gh - 1)
        cols = np.minimum(np.arange(tw) * gw // tw, gw - 1)
    return grid[rows][:, cols]


def to_gray(values01: np.ndarray) -> np.ndarray:
    """[0, 1] floats -> 8-bit gray, round half up."""
    return np.floor(values01 * 255.0 + 0.5).astype(np.uint8)


def encode_png(pixels: np.ndarray) -> bytes:
    """uint8 H x W (gray) or H x W x 3 (RGB) -> PNG bytes."""
    mode = "L" if pixels.ndim == 2 else "RGB"
    buf = io.BytesIO()
    Image.fromarray(pixels, mode=mode).save(buf, format="PNG")
    return buf.getvalue()


def render_heatmap(raw: np.ndarray, target_dims: tuple[int, int],
                   overlay: bytes | None = None, alpha: float = 0.0,
                   footprint: tuple[int, int] | None = None) -> bytes:
    """Raw map -> grayscale heatmap PNG, optionally blended over the input.

    With an overlay, out = alpha * heat + (1 - alpha) * image per channel;
    without one the heatmap itself is returned (alpha is meaningless then
    and ignored apart from range validation).
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValidationError(f"alpha must be in [0, 1], got {alpha}")
    heat = upscale_cells(normalize_map(raw), target_dims, footprint) * 255.0
    if overlay is None:
        return encode_png(np.floor(heat + 0.5).astype(np.uint8))
    img = decode_png(overlay)
    if img.shape[:2] != tuple(target_dims):
        raise ValidationError(f"overlay dims {img.shape[:2]} != target "
                              f"{tuple(target_dims)}")
    blended = alpha * heat[:, :, None] + (1.0 - alpha) * img
    pixels = np.floor(blended + 0.5).astype(np.uint8)
    if pixels.shape[2] == 1:
        pixels = pixels[:, :, 0]
    return encode_png(pixels)
