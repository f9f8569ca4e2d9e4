"""Checkpoint container: round-trips, determinism, corruption handling."""

import json
import struct

import numpy as np
import pytest

from lucidbox.engine.model import Model, model_forward
from lucidbox.errors import FormatError, IntegrityError, ValidationError
from lucidbox.modelio.checkpoint import MAGIC, load_checkpoint, save_checkpoint
from lucidbox.modelio.labels import LabelTable
from lucidbox.modelio.preprocess import PreprocessSpec

from helpers import linear_model, random_input, random_model


def spec_for(model):
    h, w, c = model.input_shape
    mode = "grayscale" if c == 1 else "rgb"
    return PreprocessSpec(height=h, width=w, channel_mode=mode)


def test_round_trip_weights_and_manifest(tmp_path):
    rng = np.random.default_rng(50)
    model = random_model(rng)
    labels = LabelTable([f"label {i}" for i in range(model.class_count)])
    path = tmp_path / "m.lbx"
    save_checkpoint(model, labels, spec_for(model), path)
    loaded, loaded_labels, loaded_spec = load_checkpoint(path)
    assert loaded.layers == model.layers
    assert loaded.input_shape == model.input_shape
    assert loaded.class_count == model.class_count
    assert loaded_labels.labels == labels.labels
    assert loaded_spec == spec_for(model)
    for name, w in model.weights.items():
        np.testing.assert_array_equal(
            loaded.weights[name], w.astype(np.float32).astype(np.float64))


def test_round_trip_preserves_forward_outputs(tmp_path):
    rng = np.random.default_rng(51)
    model = random_model(rng)
    path = tmp_path / "m.lbx"
    save_checkpoint(model, None, spec_for(model), path)
    loaded, labels, _ = load_checkpoint(path)
    assert labels is None
    x = random_input(rng, model)
    p1, _, _ = model_forward(loaded, x)
    p2, _, _ = model_forward(loaded, x)
    assert np.array_equal(p1, p2)


def test_two_saves_are_byte_identical(tmp_path):
    rng = np.random.default_rng(52)
    model = random_model(rng)
    a, b = tmp_path / "a.lbx", tmp_path / "b.lbx"
    save_checkpoint(model, None, spec_for(model), a)
    save_checkpoint(model, None, spec_for(model), b)
    assert a.read_bytes() == b.read_bytes()


def test_save_load_save_byte_identical_randomized(tmp_path):
    rng = np.random.default_rng(53)
    for i in range(10):
        model = random_model(rng)
        first = tmp_path / f"{i}a.lbx"
        second = tmp_path / f"{i}b.lbx"
        save_checkpoint(model, None, spec_for(model), first)
        loaded, _, spec = load_checkpoint(first)
        save_checkpoint(loaded, None, spec, second)
        assert first.read_bytes() == second.read_bytes()


def test_corrupted_magic_is_format_error(tmp_path):
    rng = np.random.default_rng(54)
    model = linear_model(rng)
    path = tmp_path / "m.lbx"
    save_checkpoint(model, None, spec_for(model), path)
    raw = bytearray(path.read_bytes())
    raw[:4] = b"XXXX"
    path.write_bytes(bytes(raw))
    with pytest.raises(FormatError, match="magic"):
        load_checkpoint(path)


def test_truncated_file_is_format_error(tmp_path):
    path = tmp_path / "m.lbx"
    path.write_bytes(MAGIC + b"\x00")
    with pytest.raises(FormatError):
        load_checkpoint(path)


def test_garbage_manifest_is_format_error(tmp_path):
    blob = b"{not json"
    path = tmp_path / "m.lbx"
    path.write_bytes(MAGIC + struct.pack("<I", len(blob)) + blob)
    with pytest.raises(FormatError, match="JSON"):
        load_checkpoint(path)


def _rewrite_manifest(path, mutate):
    raw = path.read_bytes()
    (n,) = struct.unpack("<I", raw[4:8])
    manifest = json.loads(raw[8:8 + n])
    mutate(manifest)
    blob = json.dumps(manifest).encode()
    path.write_bytes(MAGIC + struct.pack("<I", len(blob)) + blob + raw[8 + n:])


def test_weight_beyond_payload_is_integrity_error(tmp_path):
    rng = np.random.default_rng(55)
    model = linear_model(rng)
    path = tmp_path / "m.lbx"
    save_checkpoint(model, None, spec_for(model), path)
    _rewrite_manifest(path, lambda m: m["weights"][0].update(offset=10 ** 9))
    with pytest.raises(IntegrityError, match="payload"):
        load_checkpoint(path)


def test_payload_length_mismatch_is_integrity_error(tmp_path):
    rng = np.random.default_rng(56)
    model = linear_model(rng)
    path = tmp_path / "m.lbx"
    save_checkpoint(model, None, spec_for(model), path)
    path.write_bytes(path.read_bytes() + b"\x00\x00\x00\x00")
    with pytest.raises(IntegrityError, match="declares"):
        load_checkpoint(path)


def test_incompatible_chain_names_layer(tmp_path):
    rng = np.random.default_rng(57)
    model = linear_model(rng)
    path = tmp_path / "m.lbx"
    save_checkpoint(model, None, spec_for(model), path)

    # grow fc.kernel so the chain no longer matches the 4x4 input; rebuild the
    # payload so the file stays integral and only validation can fail
    raw = path.read_bytes()
    (n,) = struct.unpack("<I", raw[4:8])
    manifest = json.loads(raw[8:8 + n])
    manifest["layers"][1]["in_features"] = 99
    offset = 0
    for w in manifest["weights"]:
        if w["name"] == "fc.kernel":
            w["shape"] = [99, 3]
        w["offset"] = offset
        offset += int(np.prod(w["shape"])) * 4
    payload = np.zeros(offset // 4, dtype="<f4").tobytes()
    blob = json.dumps(manifest).encode()
    path.write_bytes(MAGIC + struct.pack("<I", len(blob)) + blob + payload)
    with pytest.raises(ValidationError, match="layer 1"):
        load_checkpoint(path)


def test_missing_weight_fails_before_any_write(tmp_path):
    rng = np.random.default_rng(58)
    model = linear_model(rng)
    broken = Model(layers=model.layers, weights={"fc.kernel": model.weights["fc.kernel"]},
                   input_shape=model.input_shape, class_count=model.class_count)
    path = tmp_path / "m.lbx"
    with pytest.raises(ValidationError, match="fc.bias"):
        save_checkpoint(broken, None, spec_for(model), path)
    assert not path.exists()


def test_label_count_mismatch_rejected(tmp_path):
    rng = np.random.default_rng(59)
    model = linear_model(rng, class_count=3)
    with pytest.raises(ValidationError, match="label count"):
        save_checkpoint(model, LabelTable(["a", "b"]), spec_for(model),
                        tmp_path / "m.lbx")
