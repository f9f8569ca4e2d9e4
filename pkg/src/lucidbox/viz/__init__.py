"""Visualization plugin framework and the two shipped visualizations."""

from .occlusion import OcclusionSettings, grid_dims, occlusion_map, occlusion_schema
from .registry import (
    MapResult,
    OcclusionVisualizer,
    SaliencyVisualizer,
    Visualizer,
    VisualizerDescriptor,
    VisualizerRegistry,
    run_visualizer,
)
from .render import render_heatmap
from .saliency import SaliencySettings, saliency_map, saliency_schema
from .settings import SettingDef, SettingsSchema, validate_settings

__all__ = [
    "MapResult",
    "OcclusionSettings",
    "OcclusionVisualizer",
    "SaliencySettings",
    "SaliencyVisualizer",
    "SettingDef",
    "SettingsSchema",
    "Visualizer",
    "VisualizerDescriptor",
    "VisualizerRegistry",
    "grid_dims",
    "occlusion_map",
    "occlusion_schema",
    "render_heatmap",
    "run_visualizer",
    "saliency_map",
    "saliency_schema",
    "validate_settings",
]
