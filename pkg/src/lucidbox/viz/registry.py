"""Visualizer registry and the shared run pipeline.

Visualizers are stateless; the registry is built once, after the model is
loaded, and read-only afterwards. Registering a new visualization means
implementing the small Visualizer interface, no other code changes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..engine.model import Model, ForwardTrace, model_forward
from ..errors import NotFoundError, RegistrationError, ValidationError
from ..modelio.labels import LabelTable, top_k
from ..modelio.preprocess import PreprocessSpec
from . import occlusion as occ
from . import saliency as sal
from .render import render_heatmap
from .settings import SettingsSchema, validate_settings


@dataclass(frozen=True)
class VisualizerDescriptor:
    name: str
    description: str
    schema: SettingsSchema


@dataclass
class MapResult:
    """One class's map for one input: raw values plus the rendered artifact."""

    class_index: int
    label: str
    probability: float          # unmodified base forward-pass probability
    raw_map: np.ndarray
    png: bytes


class Visualizer:
    """Interface for a registered visualization."""

    name: str = ""
    description: str = ""

    def build_schema(self, model: Model, preprocess: PreprocessSpec) -> SettingsSchema:
        raise NotImplementedError

    def compute(self, model: Model, x: np.ndarray, trace: ForwardTrace,
                class_index: int, values: dict
                ) -> tuple[np.ndarray, tuple[int, int] | None]:
        """Return (raw map, rendering footprint or None)."""
        raise NotImplementedError


class OcclusionVisualizer(Visualizer):
    name = occ.NAME
    description = occ.DESCRIPTION

    def build_schema(self, model, preprocess):
        return occ.occlusion_schema(model.input_shape, model.class_count,
                                    preprocess.mid_value())

    def compute(self, model, x, trace, class_index, values):
        settings = occ.OcclusionSettings.from_values(values)
        raw = occ.occlusion_map(model, x, class_index, settings)
        return raw, (settings.stride, settings.stride)


class SaliencyVisualizer(Visualizer):
    name = sal.NAME
    description = sal.DESCRIPTION

    def build_schema(self, model, preprocess):
        return sal.saliency_schema(model.class_count)

    def compute(self, model, x, trace, class_index, values):
        settings = sal.SaliencySettings.from_values(values)
        return sal.saliency_map(model, x, class_index, settings, trace=trace), None


class VisualizerRegistry:
    """Holds the installed visualizers for one loaded model."""

    def __init__(self, model: Model, labels: LabelTable,
                 preprocess: PreprocessSpec, *, builtins: bool = True):
        self.model = model
        self.labels = labels
        self.preprocess = preprocess
        self._visualizers: dict[str, Visualizer] = {}
        self._descriptors: dict[str, VisualizerDescriptor] = {}
        if builtins:
            self.register(OcclusionVisualizer())
            self.register(SaliencyVisualizer())

    def register(self, visualizer: Visualizer) -> None:
        if visualizer.name in self._visualizers:
            raise RegistrationError(f"visualizer {visualizer.name!r} is already "
                                    "registered")
        schema = visualizer.build_schema(self.model, self.preprocess)
        self._visualizers[visualizer.name] = visualizer
        self._descriptors[visualizer.name] = VisualizerDescriptor(
            name=visualizer.name, description=visualizer.description, schema=schema)

    def names(self) -> list[str]:
        return list(self._visualizers)  # registration order

    def descriptors(self) -> list[VisualizerDescriptor]:
        return list(self._descriptors.values())

    def _lookup(self, name: str) -> tuple[Visualizer, VisualizerDescriptor]:
        if name not in self._visualizers:
            available = ", ".join(self.names())
            raise NotFoundError(f"unknown visualizer {name!r}; "
                                f"available: {available}")
        return self._visualizers[name], self._descriptors[name]

    def schema(self, name: str) -> SettingsSchema:
        return self._lookup(name)[1].schema

    def run(self, name: str, x: np.ndarray, values: dict | None = None
            ) -> tuple[dict, list[MapResult]]:
        """Validate settings, classify once, map the top-k classes.

        Returns (normalized settings, one MapResult per selected class).
        """
        visualizer, descriptor = self._lookup(name)
        normalized = validate_settings(descriptor.schema, values or {})
        if x.ndim != 4 or x.shape[0] != 1:
            raise ValidationError(f"visualizers take a single image batch, "
                                  f"got shape {x.shape}")
        probs, _, trace = model_forward(self.model, x)
        ranked = top_k(probs[0], self.labels, normalized["class_selection"])
        target = (x.shape[1], x.shape[2])
        results = []
        for class_index, label, p in ranked:
            raw, footprint = visualizer.compute(self.model, x, trace,
                                                class_index, normalized)
            png = render_heatmap(raw, target, footprint=footprint)
            results.append(MapResult(class_index=class_index, label=label,
                                     probability=p, raw_map=raw, png=png))
        return normalized, results


def run_visualizer(registry: VisualizerRegistry, name: str, x: np.ndarray,
                   values: dict | None = None) -> list[MapResult]:
    return registry.run(name, x, values)[1]
