"""Partial occlusion maps: slide a masking window, re-classify each variant.

Each grid cell holds the model's probability for the inspected class when
that cell's window is filled with a constant value. A high cell therefore
means masking that region barely changes the classification.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..engine.model import Model, model_forward
from ..errors import SettingsError, ValidationError
from .settings import FLOAT, INT, SettingDef, SettingsSchema

NAME = "occlusion"
DESCRIPTION = ("Slides a square masking window over the image and re-classifies "
               "each masked variant; bright cells mark regions whose masking "
               "barely changes the class probability.")


@dataclass(frozen=True)
class OcclusionSettings:
    window: int
    stride: int
    occlusion_value: float
    class_selection: int = 3

    def __post_init__(self):
        if self.window < 1:
            raise SettingsError("window", f"must be >= 1, got {self.window}")
        if self.stride < 1:
            raise SettingsError("stride", f"must be >= 1, got {self.stride}")
        if self.stride > self.window:
            raise SettingsError("stride", f"must be <= window ({self.window}) so "
                                f"windows cover every pixel, got {self.stride}")
        if self.class_selection < 1:
            raise SettingsError("class_selection",
                                f"must be >= 1, got {self.class_selection}")

    @classmethod
    def from_values(cls, values: dict) -> "OcclusionSettings":
        return cls(window=values["window"], stride=values["stride"],
                   occlusion_value=values["occlusion_value"],
                   class_selection=values["class_selection"])


def default_window(height: int, width: int) -> int:
    return max(1, min(height, width) // 4)


def occlusion_schema(input_shape: tuple[int, int, int], class_count: int,
                     mid_value: float) -> SettingsSchema:
    h, w, _ = input_shape
    window = default_window(h, w)
    return SettingsSchema((
        SettingDef("window", INT, window, "Occluder side (pixels)",
                   minimum=1, maximum=min(h, w)),
        SettingDef("stride", INT, max(1, window // 2), "Window stride (pixels)",
                   minimum=1, maximum=min(h, w)),
        SettingDef("occlusion_value", FLOAT, mid_value, "Fill value"),
        SettingDef("class_selection", INT, min(3, class_count), "Top classes shown",
                   minimum=1, maximum=class_count),
    ))


def grid_dims(height: int, width: int, window: int, stride: int) -> tuple[int, int]:
    """Windows anchor at multiples of stride and never cross the border."""
    return ((height - window) // stride + 1,
            (width - window) // stride + 1)


def occlusion_map(model: Model, x: np.ndarray, class_index: int,
                  settings: OcclusionSettings) -> np.ndarray:
    """Raw occlusion grid for one image (batch of 1).

    All occluded variants are stacked into a single batch and classified in
    one forward pass; tests pin equality with the one-at-a-time loop.
    """
    if x.ndim != 4 or x.shape[0] != 1:
        raise ValidationError(f"occlusion expects a single image batch, "
                              f"got shape {x.shape}")
    _, h, w, _ = x.shape
    if settings.window > min(h, w):
        raise SettingsError("window", f"must be <= min(H, W) = {min(h, w)}, "
                            f"got {settings.window}")
    if not 0 <= class_index < model.class_count:
        raise ValidationError(f"class_index {class_index} out of range "
                              f"[0, {model.class_count})")
    gh, gw = grid_dims(h, w, settings.window, settings.stride)
    batch = np.repeat(x, gh * gw, axis=0)
    for i in range(gh):
        for j in range(gw):
            r, c = i * settings.stride, j * settings.stride
            batch[i * gw + j, r:r + settings.window, c:c + settings.window, :] = \
                settings.occlusion_value
    probs, _, _ = model_forward(model, batch)
    return probs[:, class_index].reshape(gh, gw)
