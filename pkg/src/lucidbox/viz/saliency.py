"""Saliency maps: per-pixel magnitude of d(class score)/d(input pixel).

Bright pixels are those whose perturbation changes the class score most.
The score defaults to the pre-softmax logit; differentiating the softmax
probability is available as a setting but saturates for confident models.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..engine.model import Model, ForwardTrace, input_gradient, model_forward
from ..errors import SettingsError, ValidationError
from .settings import ENUM, INT, SettingDef, SettingsSchema

NAME = "saliency"
DESCRIPTION = ("Computes the derivative of the class score with respect to every "
               "input pixel; bright pixels are those whose change would move the "
               "score most.")

LOGIT = "logit"
PROBABILITY = "probability"
MAX_ABS = "max_abs"
MEAN_ABS = "mean_abs"


@dataclass(frozen=True)
class SaliencySettings:
    score_source: str = LOGIT
    channel_reduce: str = MAX_ABS
    class_selection: int = 3

    def __post_init__(self):
        if self.score_source not in (LOGIT, PROBABILITY):
            raise SettingsError("score_source", f"must be one of [{LOGIT}, "
                                f"{PROBABILITY}], got {self.score_source!r}")
        if self.channel_reduce not in (MAX_ABS, MEAN_ABS):
            raise SettingsError("channel_reduce", f"must be one of [{MAX_ABS}, "
                                f"{MEAN_ABS}], got {self.channel_reduce!r}")
        if self.class_selection < 1:
            raise SettingsError("class_selection",
                                f"must be >= 1, got {self.class_selection}")

    @classmethod
    def from_values(cls, values: dict) -> "SaliencySettings":
        return cls(score_source=values["score_source"],
                   channel_reduce=values["channel_reduce"],
                   class_selection=values["class_selection"])


def saliency_schema(class_count: int) -> SettingsSchema:
    return SettingsSchema((
        SettingDef("score_source", ENUM, LOGIT, "Score to differentiate",
                   values=(LOGIT, PROBABILITY)),
        SettingDef("channel_reduce", ENUM, MAX_ABS, "Channel reduction",
                   values=(MAX_ABS, MEAN_ABS)),
        SettingDef("class_selection", INT, min(3, class_count), "Top classes shown",
                   minimum=1, maximum=class_count),
    ))


def saliency_map(model: Model, x: np.ndarray, class_index: int,
                 settings: SaliencySettings,
                 trace: ForwardTrace | None = None) -> np.ndarray:
    """Raw H x W saliency for one image; element-wise >= 0 by construction."""
    if x.ndim != 4 or x.shape[0] != 1:
        raise ValidationError(f"saliency expects a single image batch, "
                              f"got shape {x.shape}")
    if trace is None:
        _, _, trace = model_forward(model, x)
    grad = input_gradient(model, trace, class_index,
                          score_source=settings.score_source)
    mag = np.abs(grad[0])
    if settings.channel_reduce == MAX_ABS:
        return mag.max(axis=2)
    return mag.mean(axis=2)
