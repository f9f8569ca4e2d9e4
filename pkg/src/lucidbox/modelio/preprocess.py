"""PNG decoding and image preprocessing into model input tensors.

Pillow is used only to decode PNG bytes. Channel conversion, resizing and
scaling are implemented here with fixed, documented semantics so the
resulting tensors are exactly reproducible:

- grayscale = 0.299 R + 0.587 G + 0.114 B (BT.601), in float
- nearest resize samples input index floor(i * in/out)
- bilinear resize samples half-pixel centers, clamped at the borders
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from ..errors import DecodeError, ValidationError

GRAYSCALE = "grayscale"
RGB = "rgb"
NEAREST = "nearest"
BILINEAR = "bilinear"
UNIT = "unit"
CENTERED = "centered"

_LUMA = np.array([0.299, 0.587, 0.114])


@dataclass(frozen=True)
class PreprocessSpec:
    """How raw PNG pixels become a model input tensor; travels in the checkpoint."""

    height: int
    width: int
    channel_mode: str = GRAYSCALE
    resize: str = NEAREST
    scaling: str = UNIT

    def __post_init__(self):
        if self.height < 1 or self.width < 1:
            raise ValidationError(f"target dims must be positive, got "
                                  f"{self.height}x{self.width}")
        if self.channel_mode not in (GRAYSCALE, RGB):
            raise ValidationError(f"channel_mode must be 'grayscale' or 'rgb', "
                                  f"got {self.channel_mode!r}")
        if self.resize not in (NEAREST, BILINEAR):
            raise ValidationError(f"resize must be 'nearest' or 'bilinear', "
                                  f"got {self.resize!r}")
        if self.scaling not in (UNIT, CENTERED):
            raise ValidationError(f"scaling must be 'unit' or 'centered', "
                                  f"got {self.scaling!r}")

    @property
    def channels(self) -> int:
        return 1 if self.channel_mode == GRAYSCALE else 3

    @property
    def target_shape(self) -> tuple[int, int, int]:
        return (self.height, self.width, self.channels)

    def mid_value(self) -> float:
        """Mid-range of the preprocessed domain (occluder fill default)."""
        return 0.5 if self.scaling == UNIT else 0.0

    def to_manifest(self) -> dict:
        return {"target": [self.height, self.width, self.channels],
                "channel_mode": self.channel_mode,
                "resize": self.resize, "scaling": self.scaling}

    @classmethod
    def from_manifest(cls, entry: dict) -> "PreprocessSpec":
        target = entry["target"]
        spec = cls(height=int(target[0]), width=int(target[1]),
                   channel_mode=entry["channel_mode"],
                   resize=entry["resize"], scaling=entry["scaling"])
        if spec.channels != int(target[2]):
            raise ValidationError(f"preprocess target channels {target[2]} does not "
                                  f"match channel_mode {spec.channel_mode!r}")
        return spec


def decode_png(data: bytes) -> np.ndarray:
    """PNG bytes -> H x W x C float64 array in [0, 255]; alpha dropped."""
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise DecodeError(f"cannot decode PNG: {exc}") from exc
    if img.format != "PNG":
        raise DecodeError(f"expected PNG, got {img.format or 'unknown format'}")
    if img.mode == "P":
        img = img.convert("RGBA")
    if img.mode == "LA":
        img = img.convert("L")
    elif img.mode == "RGBA":
        img = img.convert("RGB")
    if img.mode not in ("L", "RGB"):
        raise DecodeError(f"unsupported PNG mode {img.mode!r}; "
                          "expected 8-bit gray/RGB/RGBA")
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[:, :, None]
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValidationError("image has a zero dimension")
    return arr


def convert_channels(img: np.ndarray, mode: str) -> np.ndarray:
    """H x W x {1,3} -> H x W x target channels."""
    if mode == GRAYSCALE:
        if img.shape[2] == 1:
            return img
        return (img @ _LUMA)[:, :, None]
    if img.shape[2] == 3:
        return img
    return np.repeat(img, 3, axis=2)


def resize_nearest(img: np.ndarray, height: int, width: int) -> np.ndarray:
    ih, iw = img.shape[:2]
    rows = np.minimum((np.arange(height) * ih) // height, ih - 1)
    cols = np.minimum((np.arange(width) * iw) // width, iw - 1)
    return img[rows][:, cols]


def resize_bilinear(img: np.ndarray, height: int, width: int) -> np.ndarray:
    ih, iw = img.shape[:2]
    ys = np.clip((np.arange(height) + 0.5) * ih / height - 0.5, 0.0, ih - 1.0)
    xs = np.clip((np.arange(width) + 0.5) * iw / width - 0.5, 0.0, iw - 1.0)
    y0 = np.floor(ys).astype(int)
    x0 = np.floor(xs).astype(int)
    y1 = np.minimum(y0 + 1, ih - 1)
    x1 = np.minimum(x0 + 1, iw - 1)
    wy = (ys - y0)[:, None, None]
    wx = (xs - x0)[None, :, None]
    top = img[y0][:, x0] * (1 - wx) + img[y0][:, x1] * wx
    bottom = img[y1][:, x0] * (1 - wx) + img[y1][:, x1] * wx
    return top * (1 - wy) + bottom * wy


def preprocess_image(png_bytes: bytes, spec: PreprocessSpec) -> np.ndarray:
    """PNG bytes -> 1 x H x W x C float64 tensor per the given recipe."""
    img = decode_png(png_bytes)
    img = convert_channels(img, spec.channel_mode)
    if img.shape[:2] != (spec.height, spec.width):
        if spec.resize == NEAREST:
            img = resize_nearest(img, spec.height, spec.width)
        else:
            img = resize_bilinear(img, spec.height, spec.width)
    img = img / 255.0
    if spec.scaling == CENTERED:
        img = img - 0.5
    return np.ascontiguousarray(img[None, :, :, :])
