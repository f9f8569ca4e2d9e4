"""Model description, validated construction, forward pass and input gradients.

A Model is an ordered chain of LayerSpecs plus a name -> weight-array map.
Shape compatibility of the chain is checked once, at construction or
checkpoint load, never per inference. Models and their weights are
immutable; training produces a new Model.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import ShapeError, TraceMismatchError, ValidationError
from . import layers as L
from .tensor import as_tensor, check_finite, freeze

CONV2D = "conv2d"
MAXPOOL2D = "maxpool2d"
DENSE = "dense"
RELU = "relu"
FLATTEN = "flatten"
SOFTMAX = "softmax"

_KINDS = (CONV2D, MAXPOOL2D, DENSE, RELU, FLATTEN, SOFTMAX)

_uid = itertools.count(1)


@dataclass(frozen=True)
class LayerSpec:
    """One layer in the chain; only fields relevant to ``kind`` are set."""

    kind: str
    kernel: tuple[int, int] | None = None      # conv2d: kh, kw
    in_channels: int | None = None
    out_channels: int | None = None
    stride: int | None = None                  # conv2d, maxpool2d
    padding: str | None = None                 # conv2d: valid | same
    window: int | None = None                  # maxpool2d
    in_features: int | None = None             # dense
    out_features: int | None = None
    kernel_name: str | None = None             # weight refs for conv2d/dense
    bias_name: str | None = None

    def weight_shapes(self) -> dict[str, tuple[int, ...]]:
        """Weight name -> implied shape for this layer (empty if weightless)."""
        if self.kind == CONV2D:
            kh, kw = self.kernel
            return {self.kernel_name: (kh, kw, self.in_channels, self.out_channels),
                    self.bias_name: (self.out_channels,)}
        if self.kind == DENSE:
            return {self.kernel_name: (self.in_features, self.out_features),
                    self.bias_name: (self.out_features,)}
        return {}

    def to_manifest(self) -> dict:
        entry: dict = {"kind": self.kind}
        if self.kind == CONV2D:
            entry.update(kernel=list(self.kernel), in_channels=self.in_channels,
                         out_channels=self.out_channels, stride=self.stride,
                         padding=self.padding,
                         weights={"kernel": self.kernel_name, "bias": self.bias_name})
        elif self.kind == MAXPOOL2D:
            entry.update(window=self.window, stride=self.stride)
        elif self.kind == DENSE:
            entry.update(in_features=self.in_features, out_features=self.out_features,
                         weights={"kernel": self.kernel_name, "bias": self.bias_name})
        return entry

    @classmethod
    def from_manifest(cls, entry: dict) -> "LayerSpec":
        kind = entry.get("kind")
        if kind not in _KINDS:
            raise ValidationError(f"unknown layer kind {kind!r}")
        if kind == CONV2D:
            w = entry["weights"]
            return conv2d(tuple(entry["kernel"]), entry["in_channels"],
                          entry["out_channels"], stride=entry["stride"],
                          padding=entry["padding"],
                          kernel_name=w["kernel"], bias_name=w["bias"])
        if kind == MAXPOOL2D:
            return maxpool2d(entry["window"], entry["stride"])
        if kind == DENSE:
            w = entry["weights"]
            return dense(entry["in_features"], entry["out_features"],
                         kernel_name=w["kernel"], bias_name=w["bias"])
        return cls(kind=kind)


def conv2d(kernel: tuple[int, int], in_channels: int, out_channels: int, *,
           stride: int = 1, padding: str = L.VALID,
           kernel_name: str, bias_name: str) -> LayerSpec:
    return LayerSpec(kind=CONV2D, kernel=(int(kernel[0]), int(kernel[1])),
                     in_channels=in_channels, out_channels=out_channels,
                     stride=stride, padding=padding,
                     kernel_name=kernel_name, bias_name=bias_name)


def maxpool2d(window: int, stride: int) -> LayerSpec:
    return LayerSpec(kind=MAXPOOL2D, window=window, stride=stride)


def dense(in_features: int, out_features: int, *,
          kernel_name: str, bias_name: str) -> LayerSpec:
    return LayerSpec(kind=DENSE, in_features=in_features, out_features=out_features,
                     kernel_name=kernel_name, bias_name=bias_name)


def relu() -> LayerSpec:
    return LayerSpec(kind=RELU)


def flatten() -> LayerSpec:
    return LayerSpec(kind=FLATTEN)


def softmax_out() -> LayerSpec:
    return LayerSpec(kind=SOFTMAX)


@dataclass
class Model:
    layers: tuple[LayerSpec, ...]
    weights: dict[str, np.ndarray]
    input_shape: tuple[int, int, int]          # H, W, C
    class_count: int
    uid: int = field(default_factory=lambda: next(_uid), compare=False)


def _layer_out_shape(i: int, spec: LayerSpec, state: tuple) -> tuple:
    """Advance the shape state ('spatial', (h,w,c)) / ('flat', (d,)) one layer."""
    tag, dims = state

    def bad(msg: str):
        return ValidationError(f"layer {i} ({spec.kind}): {msg}")

    if spec.kind == CONV2D:
        if tag != "spatial":
            raise bad("expects spatial H x W x C input")
        h, w, c = dims
        if c != spec.in_channels:
            raise bad(f"input channels {c} != in_channels {spec.in_channels}")
        if spec.stride < 1:
            raise bad(f"stride must be >= 1, got {spec.stride}")
        if spec.padding not in (L.VALID, L.SAME):
            raise bad(f"padding must be 'valid' or 'same', got {spec.padding!r}")
        if spec.padding == L.VALID and (spec.kernel[0] > h or spec.kernel[1] > w):
            raise bad(f"kernel {spec.kernel[0]}x{spec.kernel[1]} exceeds input {h}x{w}")
        oh = L._conv_out_dim(h, spec.kernel[0], spec.stride, spec.padding)
        ow = L._conv_out_dim(w, spec.kernel[1], spec.stride, spec.padding)
        return ("spatial", (oh, ow, spec.out_channels))
    if spec.kind == MAXPOOL2D:
        if tag != "spatial":
            raise bad("expects spatial H x W x C input")
        h, w, c = dims
        if spec.window < 1 or spec.stride < 1:
            raise bad(f"window/stride must be >= 1, got {spec.window}/{spec.stride}")
        if spec.window > h or spec.window > w:
            raise bad(f"window {spec.window} exceeds input {h}x{w}")
        oh = (h - spec.window) // spec.stride + 1
        ow = (w - spec.window) // spec.stride + 1
        return ("spatial", (oh, ow, c))
    if spec.kind == DENSE:
        if tag != "flat":
            raise bad("expects flat input; insert a flatten layer")
        if dims[0] != spec.in_features:
            raise bad(f"input width {dims[0]} != in_features {spec.in_features}")
        return ("flat", (spec.out_features,))
    if spec.kind == FLATTEN:
        if tag != "spatial":
            raise bad("expects spatial H x W x C input")
        h, w, c = dims
        return ("flat", (h * w * c,))
    if spec.kind == RELU:
        return state
    if spec.kind == SOFTMAX:
        if tag != "flat":
            raise bad("expects flat logits")
        return state
    raise bad("unknown layer kind")


def validate_chain(layers: tuple[LayerSpec, ...], input_shape: tuple[int, int, int],
                   class_count: int) -> None:
    if not layers:
        raise ValidationError("model has no layers")
    state = ("spatial", tuple(input_shape))
    for i, spec in enumerate(layers):
        if spec.kind == SOFTMAX and i != len(layers) - 1:
            raise ValidationError(f"layer {i} (softmax): may appear only as the final layer")
        state = _layer_out_shape(i, spec, state)
    tag, dims = state
    if tag != "flat" or dims[0] != class_count:
        raise ValidationError(f"final layer output {dims} does not match "
                              f"class_count {class_count}")


def build_model(layers, weights, input_shape: tuple[int, int, int],
                class_count: int) -> Model:
    """Validate the chain and weight shapes, freeze weights, return the Model."""
    layers = tuple(layers)
    input_shape = tuple(int(d) for d in input_shape)
    if len(input_shape) != 3 or any(d < 1 for d in input_shape):
        raise ValidationError(f"input_shape must be positive H x W x C, got {input_shape}")
    if class_count < 1:
        raise ValidationError(f"class_count must be positive, got {class_count}")
    validate_chain(layers, input_shape, class_count)
    frozen: dict[str, np.ndarray] = {}
    for i, spec in enumerate(layers):
        for name, shape in spec.weight_shapes().items():
            if name not in weights:
                raise ValidationError(f"layer {i} ({spec.kind}): weight {name!r} missing")
            arr = as_tensor(weights[name])
            if arr.shape != shape:
                raise ValidationError(f"layer {i} ({spec.kind}): weight {name!r} has shape "
                                      f"{arr.shape}, expected {shape}")
            frozen[name] = freeze(arr)
    return Model(layers=layers, weights=frozen, input_shape=input_shape,
                 class_count=class_count)


@dataclass
class ForwardTrace:
    """Activations retained from one forward pass, for differentiation.

    activations[i] is the input of layer i; activations[i+1] its output.
    aux[i] holds maxpool argmax offsets where applicable.
    """

    model_uid: int
    activations: list[np.ndarray]
    aux: list[np.ndarray | None]
    logits: np.ndarray
    probabilities: np.ndarray

    @property
    def input(self) -> np.ndarray:
        return self.activations[0]


def _run_layer(model: Model, spec: LayerSpec, x: np.ndarray):
    if spec.kind == CONV2D:
        y = L.conv2d_forward(x, model.weights[spec.kernel_name],
                             model.weights[spec.bias_name], spec.stride, spec.padding)
        return y, None
    if spec.kind == MAXPOOL2D:
        return L.maxpool2d_forward(x, spec.window, spec.stride)
    if spec.kind == DENSE:
        y = L.dense_forward(x, model.weights[spec.kernel_name],
                            model.weights[spec.bias_name])
        return y, None
    if spec.kind == RELU:
        return L.relu_forward(x), None
    if spec.kind == FLATTEN:
        return L.flatten_forward(x), None
    if spec.kind == SOFTMAX:
        return L.softmax(x), None
    raise ValidationError(f"unknown layer kind {spec.kind!r}")


def model_forward(model: Model, x) -> tuple[np.ndarray, np.ndarray, ForwardTrace]:
    """Run the chain; returns (probabilities, logits, trace).

    If the model ends in a softmax layer, logits are that layer's input;
    otherwise the final output is taken as logits and softmax is applied
    on top to produce probabilities.
    """
    x = as_tensor(x)
    if x.ndim != 4 or x.shape[1:] != model.input_shape:
        raise ShapeError(f"input shape {x.shape} does not match model input "
                         f"N x {'x'.join(map(str, model.input_shape))}")
    activations = [freeze(x.copy())]
    aux: list[np.ndarray | None] = []
    logits = None
    for spec in model.layers:
        if spec.kind == SOFTMAX:
            logits = activations[-1]
        y, a = _run_layer(model, spec, activations[-1])
        activations.append(freeze(y))
        aux.append(a)
    if logits is None:
        logits = activations[-1]
        probabilities = L.softmax(logits)
    else:
        probabilities = activations[-1]
    check_finite(logits, "logits")
    check_finite(probabilities, "probabilities")
    trace = ForwardTrace(model_uid=model.uid, activations=activations, aux=aux,
                         logits=logits, probabilities=probabilities)
    return probabilities, logits, trace


def _check_trace(model: Model, trace: ForwardTrace) -> None:
    if trace.model_uid != model.uid:
        raise TraceMismatchError("trace was produced by a different model")
    if len(trace.activations) != len(model.layers) + 1:
        raise TraceMismatchError("trace layer count does not match model")


def backward_from_logits(model: Model, trace: ForwardTrace, grad_logits: np.ndarray,
                         *, want_weight_grads: bool = False
                         ) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    """Reverse-mode sweep seeded at the logits.

    Returns (gradient w.r.t. model input, weight-name -> gradient). The
    trailing softmax layer, when present, is skipped: callers seed in
    logit space.
    """
    _check_trace(model, trace)
    weight_grads: dict[str, np.ndarray] = {}
    grad = grad_logits
    for i in range(len(model.layers) - 1, -1, -1):
        spec = model.layers[i]
        x = trace.activations[i]
        if spec.kind == SOFTMAX:
            continue
        if spec.kind == CONV2D:
            grad, gk, gb = L.conv2d_backward(x, model.weights[spec.kernel_name],
                                             spec.stride, spec.padding, grad)
            if want_weight_grads:
                weight_grads[spec.kernel_name] = gk
                weight_grads[spec.bias_name] = gb
        elif spec.kind == MAXPOOL2D:
            grad = L.maxpool2d_backward(x.shape, spec.window, spec.stride,
                                        trace.aux[i], grad)
        elif spec.kind == DENSE:
            grad, gw, gb = L.dense_backward(x, model.weights[spec.kernel_name], grad)
            if want_weight_grads:
                weight_grads[spec.kernel_name] = gw
                weight_grads[spec.bias_name] = gb
        elif spec.kind == RELU:
            grad = L.relu_backward(x, grad)
        elif spec.kind == FLATTEN:
            grad = L.flatten_backward(x.shape, grad)
    return np.ascontiguousarray(grad), weight_grads


def input_gradient(model: Model, trace: ForwardTrace, class_index: int, *,
                   score_source: str = "logit") -> np.ndarray:
    """d(score for class_index) / d(input), same shape as the traced input.

    score_source 'logit' differentiates the pre-softmax score (the default:
    saturated softmax would otherwise shrink gradients); 'probability'
    differentiates the softmax output instead.
    """
    _check_trace(model, trace)
    if not 0 <= class_index < model.class_count:
        raise ValidationError(f"class_index {class_index} out of range "
                              f"[0, {model.class_count})")
    n, k = trace.logits.shape
    seed = np.zeros((n, k), dtype=np.float64)
    if score_source == "logit":
        seed[:, class_index] = 1.0
    elif score_source == "probability":
        # row of the softmax Jacobian: dp_c/dz_k = p_c * ([k == c] - p_k)
        p = trace.probabilities
        seed = -p[:, class_index:class_index + 1] * p
        seed[:, class_index] += p[:, class_index]
    else:
        raise ValidationError(f"score_source must be 'logit' or 'probability', "
                              f"got {score_source!r}")
    grad, _ = backward_from_logits(model, trace, seed)
    return grad


def with_weights(model: Model, weights: dict[str, np.ndarray]) -> Model:
    """New Model (fresh uid) sharing the chain but with replaced weights."""
    frozen = {name: freeze(as_tensor(arr)) for name, arr in weights.items()}
    return replace(model, weights=frozen, uid=next(_uid))
