"""Checkpoint format, labels, image preprocessing and app configuration."""

from .checkpoint import load_checkpoint, save_checkpoint
from .config import AppConfig, load_config
from .labels import LabelTable, decode_predictions, top_k
from .preprocess import PreprocessSpec, decode_png, preprocess_image

__all__ = [
    "AppConfig",
    "LabelTable",
    "PreprocessSpec",
    "decode_png",
    "decode_predictions",
    "load_checkpoint",
    "load_config",
    "preprocess_image",
    "save_checkpoint",
    "top_k",
]
