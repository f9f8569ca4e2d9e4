"""Image preprocessing: decoding, channel conversion, resizing, scaling."""

import io
import struct
import zlib

import numpy as np
import pytest
from PIL import Image

from lucidbox.errors import DecodeError, ValidationError
from lucidbox.modelio.preprocess import (
    PreprocessSpec,
    decode_png,
    preprocess_image,
    resize_bilinear,
    resize_nearest,
)


def png_bytes(arr, mode):
    buf = io.BytesIO()
    Image.fromarray(arr, mode=mode).save(buf, format="PNG")
    return buf.getvalue()


def test_grayscale_unit_scaling():
    arr = np.zeros((28, 28), dtype=np.uint8)
    arr[0, 0] = 255
    arr[5, 7] = 128
    spec = PreprocessSpec(height=28, width=28)
    t = preprocess_image(png_bytes(arr, "L"), spec)
    assert t.shape == (1, 28, 28, 1)
    assert t.min() >= 0.0 and t.max() <= 1.0
    assert t[0, 0, 0, 0] == 1.0
    assert t[0, 5, 7, 0] == 128 / 255


def test_pure_red_luminance():
    arr = np.zeros((4, 4, 3), dtype=np.uint8)
    arr[:, :, 0] = 255
    spec = PreprocessSpec(height=4, width=4, channel_mode="grayscale")
    t = preprocess_image(png_bytes(arr, "RGB"), spec)
    np.testing.assert_allclose(t, np.full((1, 4, 4, 1), 0.299), atol=1e-12, rtol=0)


def test_nearest_downscale_picks_even_indices():
    rng = np.random.default_rng(60)
    arr = rng.integers(0, 256, size=(56, 56), dtype=np.uint8)
    spec = PreprocessSpec(height=28, width=28, resize="nearest")
    t = preprocess_image(png_bytes(arr, "L"), spec)
    want = arr[::2, ::2].astype(np.float64) / 255.0
    np.testing.assert_array_equal(t[0, :, :, 0], want)


def test_bilinear_upscale_hand_case():
    img = np.array([[0.0], [1.0]])[:, :, None] * 255  # 2x1 column
    out = resize_bilinear(img, 4, 1)
    # half-pixel centers: source rows 0, 0.25, 0.75, 1 (clamped)
    np.testing.assert_allclose(out[:, 0, 0], [0.0, 0.25 * 255, 0.75 * 255, 255.0],
                               atol=1e-12, rtol=0)


def test_bilinear_downscale_hand_case():
    img = np.arange(4.0)[:, None, None]  # rows 0..3
    out = resize_bilinear(img, 2, 1)
    np.testing.assert_allclose(out[:, 0, 0], [0.5, 2.5], atol=1e-12, rtol=0)


def test_nearest_identity_when_same_size():
    rng = np.random.default_rng(61)
    img = rng.standard_normal((5, 7, 3))
    np.testing.assert_array_equal(resize_nearest(img, 5, 7), img)


def test_alpha_dropped():
    arr = np.zeros((3, 3, 4), dtype=np.uint8)
    arr[:, :, 1] = 200  # green
    arr[:, :, 3] = 10   # alpha, must be ignored
    spec = PreprocessSpec(height=3, width=3, channel_mode="rgb")
    t = preprocess_image(png_bytes(arr, "RGBA"), spec)
    assert t.shape == (1, 3, 3, 3)
    np.testing.assert_allclose(t[0, :, :, 1], np.full((3, 3), 200 / 255))
    np.testing.assert_allclose(t[0, :, :, 0], np.zeros((3, 3)))


def test_gray_replicated_to_rgb():
    arr = np.full((2, 2), 100, dtype=np.uint8)
    spec = PreprocessSpec(height=2, width=2, channel_mode="rgb")
    t = preprocess_image(png_bytes(arr, "L"), spec)
    assert t.shape == (1, 2, 2, 3)
    assert np.all(t == 100 / 255)


def test_centered_scaling():
    arr = np.full((2, 2), 255, dtype=np.uint8)
    spec = PreprocessSpec(height=2, width=2, scaling="centered")
    t = preprocess_image(png_bytes(arr, "L"), spec)
    np.testing.assert_allclose(t, np.full((1, 2, 2, 1), 0.5))


def test_deterministic():
    rng = np.random.default_rng(62)
    data = png_bytes(rng.integers(0, 256, size=(17, 13), dtype=np.uint8), "L")
    spec = PreprocessSpec(height=8, width=8, resize="bilinear")
    a = preprocess_image(data, spec)
    b = preprocess_image(data, spec)
    assert np.array_equal(a, b)


def test_undecodable_bytes():
    with pytest.raises(DecodeError):
        decode_png(b"this is not a png at all")


def test_non_png_image_rejected():
    buf = io.BytesIO()
    Image.fromarray(np.zeros((4, 4), dtype=np.uint8), mode="L").save(buf, format="BMP")
    with pytest.raises(DecodeError, match="PNG"):
        decode_png(buf.getvalue())


def test_zero_dimension_png_rejected():
    def chunk(typ, data):
        return (struct.pack(">I", len(data)) + typ + data
                + struct.pack(">I", zlib.crc32(typ + data)))
    sig = b"\x89PNG\r\n\x1a\n"
    ihdr = struct.pack(">IIBBBBB", 0, 1, 8, 0, 0, 0, 0)  # width 0
    png = sig + chunk(b"IHDR", ihdr) + chunk(b"IDAT", zlib.compress(b"\x00")) \
        + chunk(b"IEND", b"")
    with pytest.raises(DecodeError):
        decode_png(png)


def test_spec_validation():
    with pytest.raises(ValidationError, match="positive"):
        PreprocessSpec(height=0, width=4)
    with pytest.raises(ValidationError, match="channel_mode"):
        PreprocessSpec(height=4, width=4, channel_mode="cmyk")
    with pytest.raises(ValidationError, match="resize"):
        PreprocessSpec(height=4, width=4, resize="lanczos")
    with pytest.raises(ValidationError, match="scaling"):
        PreprocessSpec(height=4, width=4, scaling="z-score")


def test_manifest_round_trip():
    spec = PreprocessSpec(height=9, width=4, channel_mode="rgb",
                          resize="bilinear", scaling="centered")
    assert PreprocessSpec.from_manifest(spec.to_manifest()) == spec
