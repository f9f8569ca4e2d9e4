"""Native CNN inference engine: tensors, layers, reverse-mode gradients, SGD."""

from .layers import (
    conv2d_forward,
    dense_forward,
    maxpool2d_forward,
    relu_forward,
    softmax,
)
from .model import (
    ForwardTrace,
    LayerSpec,
    Model,
    build_model,
    conv2d,
    dense,
    flatten,
    input_gradient,
    maxpool2d,
    model_forward,
    relu,
    softmax_out,
    validate_chain,
)
from .tensor import as_tensor, freeze, one_hot
from .train import cross_entropy_from_logits, train_step

__all__ = [
    "ForwardTrace",
    "LayerSpec",
    "Model",
    "as_tensor",
    "build_model",
    "conv2d",
    "conv2d_forward",
    "cross_entropy_from_logits",
    "dense",
    "dense_forward",
    "flatten",
    "freeze",
    "input_gradient",
    "maxpool2d",
    "maxpool2d_forward",
    "model_forward",
    "one_hot",
    "relu",
    "relu_forward",
    "softmax",
    "softmax_out",
    "train_step",
    "validate_chain",
]
