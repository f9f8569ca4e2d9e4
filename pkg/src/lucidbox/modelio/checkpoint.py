"""Native checkpoint container.

Layout: magic ``LBX1`` (4 bytes) | u32 little-endian manifest length |
manifest as UTF-8 JSON | raw little-endian f32 weight payload, row-major,
in manifest order. Weights are stored 32-bit and promoted to 64-bit on
load; saving is deterministic (same model -> identical bytes).
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from ..errors import FormatError, IntegrityError, ValidationError
from ..engine.model import LayerSpec, Model, build_model
from .labels import LabelTable
from .preprocess import PreprocessSpec

MAGIC = b"LBX1"


def _manifest(model: Model, labels: LabelTable | None,
              preprocess: PreprocessSpec) -> tuple[dict, list[str]]:
    order = sorted(model.weights)
    entries = []
    offset = 0
    for name in order:
        arr = model.weights[name]
        nbytes = arr.size * 4
        entries.append({"name": name, "dtype": "f32",
                        "shape": list(arr.shape), "offset": offset})
        offset += nbytes
    manifest = {
        "layers": [spec.to_manifest() for spec in model.layers],
        "weights": entries,
        "input_shape": list(model.input_shape),
        "class_count": model.class_count,
        "preprocess": preprocess.to_manifest(),
    }
    if labels is not None:
        manifest["labels"] = list(labels.labels)
    return manifest, order


def save_checkpoint(model: Model, labels: LabelTable | None,
                    preprocess: PreprocessSpec, path) -> None:
    """Write the model; validates before any byte is written."""
    # re-validate so a hand-mutated Model cannot produce a corrupt file
    build_model(model.layers, model.weights, model.input_shape, model.class_count)
    if labels is not None and len(labels) != model.class_count:
        raise ValidationError(f"label count {len(labels)} != class_count "
                              f"{model.class_count}")
    manifest, order = _manifest(model, labels, preprocess)
    blob = json.dumps(manifest, sort_keys=True, separators=(",", ":")).encode("utf-8")
    payload = b"".join(
        np.ascontiguousarray(model.weights[name], dtype="<f4").tobytes()
        for name in order)
    Path(path).write_bytes(MAGIC + struct.pack("<I", len(blob)) + blob + payload)


def load_checkpoint(path) -> tuple[Model, LabelTable | None, PreprocessSpec]:
    """Read, integrity-check and fully validate a checkpoint."""
    raw = Path(path).read_bytes()
    if len(raw) < 8 or raw[:4] != MAGIC:
        raise FormatError(f"{path}: not a checkpoint (bad magic/version)")
    (manifest_len,) = struct.unpack("<I", raw[4:8])
    if 8 + manifest_len > len(raw):
        raise FormatError(f"{path}: truncated manifest")
    try:
        manifest = json.loads(raw[8:8 + manifest_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: manifest is not valid JSON ({exc})") from exc
    payload = raw[8 + manifest_len:]

    for key in ("layers", "weights", "input_shape", "class_count", "preprocess"):
        if key not in manifest:
            raise FormatError(f"{path}: manifest missing key {key!r}")

    weights: dict[str, np.ndarray] = {}
    declared = 0
    for entry in manifest["weights"]:
        if entry.get("dtype") != "f32":
            raise FormatError(f"{path}: unsupported weight dtype {entry.get('dtype')!r}")
        shape = tuple(int(d) for d in entry["shape"])
        count = int(np.prod(shape)) if shape else 1
        offset, nbytes = int(entry["offset"]), count * 4
        if offset < 0 or offset + nbytes > len(payload):
            raise IntegrityError(f"{path}: weight {entry['name']!r} "
                                 f"(offset {offset}, {nbytes} bytes) lies outside "
                                 f"the {len(payload)}-byte payload")
        declared += nbytes
        arr = np.frombuffer(payload, dtype="<f4", count=count, offset=offset)
        weights[entry["name"]] = arr.astype(np.float64).reshape(shape)
    if declared != len(payload):
        raise IntegrityError(f"{path}: payload is {len(payload)} bytes but manifest "
                             f"declares {declared}")

    try:
        layers = [LayerSpec.from_manifest(e) for e in manifest["layers"]]
    except (KeyError, TypeError, ValidationError) as exc:
        raise ValidationError(f"{path}: bad layer entry ({exc})") from exc
    model = build_model(layers, weights, manifest["input_shape"],
                        manifest["class_count"])
    labels = None
    if "labels" in manifest:
        labels = LabelTable(manifest["labels"])
        if len(labels) != model.class_count:
            raise ValidationError(f"{path}: {len(labels)} labels for "
                                  f"{model.class_count} classes")
    preprocess = PreprocessSpec.from_manifest(manifest["preprocess"])
    return model, labels, preprocess
