"""Shared fixtures: a small saved checkpoint and PNG images."""

import io

import numpy as np
import pytest
from PIL import Image

from lucidbox.engine import model as M
from lucidbox.modelio.checkpoint import save_checkpoint
from lucidbox.modelio.labels import LabelTable
from lucidbox.modelio.preprocess import PreprocessSpec


def make_small_model(seed=1000):
    """8x8 grayscale conv-pool-dense classifier with 3 classes."""
    rng = np.random.default_rng(seed)
    layers = [
        M.conv2d((3, 3), 1, 2, kernel_name="conv.kernel", bias_name="conv.bias"),
        M.relu(),
        M.maxpool2d(2, 2),
        M.flatten(),
        M.dense(3 * 3 * 2, 3, kernel_name="fc.kernel", bias_name="fc.bias"),
        M.softmax_out(),
    ]
    weights = {
        "conv.kernel": rng.standard_normal((3, 3, 1, 2)) / 3.0,
        "conv.bias": 0.1 * rng.standard_normal(2),
        "fc.kernel": rng.standard_normal((18, 3)) / 4.0,
        "fc.bias": 0.1 * rng.standard_normal(3),
    }
    return M.build_model(layers, weights, (8, 8, 1), 3)


def gray_png(side=8, seed=0):
    rng = np.random.default_rng(seed)
    arr = rng.integers(0, 256, size=(side, side), dtype=np.uint8)
    buf = io.BytesIO()
    Image.fromarray(arr, mode="L").save(buf, format="PNG")
    return buf.getvalue()


@pytest.fixture(scope="session")
def small_checkpoint(tmp_path_factory):
    path = tmp_path_factory.mktemp("ckpt") / "small.lbx"
    model = make_small_model()
    labels = LabelTable(["ant", "bee", "cat"])
    preprocess = PreprocessSpec(height=8, width=8)
    save_checkpoint(model, labels, preprocess, path)
    return path


@pytest.fixture
def app_config(small_checkpoint, tmp_path):
    from lucidbox.modelio.config import AppConfig

    return AppConfig(checkpoint=small_checkpoint, temp_root=tmp_path / "sessions")
