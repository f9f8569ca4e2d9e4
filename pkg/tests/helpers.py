"""Shared builders for randomized test models."""

from __future__ import annotations

import numpy as np

from lucidbox.engine import model as M


def he_init(rng, shape, fan_in):
    return rng.standard_normal(shape) / np.sqrt(max(fan_in, 1))


def linear_model(rng, h=4, w=4, c=1, class_count=3, with_softmax=True,
                 weight=None, bias=None):
    """flatten -> dense (-> softmax): logits are W^T x + b."""
    d = h * w * c
    if weight is None:
        weight = rng.standard_normal((d, class_count))
    if bias is None:
        bias = rng.standard_normal(class_count)
    layers = [M.flatten(), M.dense(d, class_count, kernel_name="fc.kernel",
                                   bias_name="fc.bias")]
    if with_softmax:
        layers.append(M.softmax_out())
    return M.build_model(layers, {"fc.kernel": weight, "fc.bias": bias},
                         (h, w, c), class_count)


def random_model(rng, max_side=12, max_channels=3):
    """A random small model from one of four layer families (<= 4 layers)."""
    h = int(rng.integers(4, max_side + 1))
    w = int(rng.integers(4, max_side + 1))
    c = int(rng.integers(1, max_channels + 1))
    class_count = int(rng.integers(2, 6))
    family = int(rng.integers(0, 4))
    layers = []
    weights = {}

    def add_conv(idx, hh, ww, cc):
        k = int(rng.integers(1, min(4, hh, ww) + 1))
        cout = int(rng.integers(1, 5))
        stride = int(rng.integers(1, 3))
        padding = rng.choice(["valid", "same"])
        name = f"conv{idx}"
        layers.append(M.conv2d((k, k), cc, cout, stride=stride, padding=padding,
                               kernel_name=f"{name}.kernel", bias_name=f"{name}.bias"))
        weights[f"{name}.kernel"] = he_init(rng, (k, k, cc, cout), k * k * cc)
        weights[f"{name}.bias"] = 0.1 * rng.standard_normal(cout)
        if padding == "same":
            hh, ww = -(-hh // stride), -(-ww // stride)
        else:
            hh, ww = (hh - k) // stride + 1, (ww - k) // stride + 1
        return hh, ww, cout

    hh, ww, cc = h, w, c
    if family == 1:
        hh, ww, cc = add_conv(0, hh, ww, cc)
        layers.append(M.relu())
    elif family == 2:
        hh, ww, cc = add_conv(0, hh, ww, cc)
        if min(hh, ww) >= 2:
            window = int(rng.integers(2, min(3, hh, ww) + 1))
            stride = int(rng.integers(1, window + 1))
            layers.append(M.maxpool2d(window, stride))
            hh = (hh - window) // stride + 1
            ww = (ww - window) // stride + 1
    elif family == 3:
        hh, ww, cc = add_conv(0, hh, ww, cc)
        hh, ww, cc = add_conv(1, hh, ww, cc)
    layers.append(M.flatten())
    d = hh * ww * cc
    layers.append(M.dense(d, class_count, kernel_name="fc.kernel", bias_name="fc.bias"))
    weights["fc.kernel"] = he_init(rng, (d, class_count), d)
    weights["fc.bias"] = 0.1 * rng.standard_normal(class_count)
    return M.build_model(layers, weights, (h, w, c), class_count)


def random_input(rng, model, n=1):
    return rng.standard_normal((n, *model.input_shape))
