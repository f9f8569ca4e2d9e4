"""lucidbox: occlusion and saliency visualizations for small CNN classifiers."""

__version__ = "0.1.0"
