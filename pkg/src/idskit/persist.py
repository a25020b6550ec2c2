"""Model persistence: a canonical, diff-friendly JSON document per model.

Canonical form means sorted keys, two-space indentation, ASCII escapes,
and shortest round-trip float formatting, so identical training runs
produce byte-identical files. Writes are atomic (temp file + rename).
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .classifiers.base import Model, model_class_for
from .dataset import AttributeSchema
from .errors import ModelError

MODEL_FORMAT_VERSION = 1


def schema_fingerprint(schema) -> str:
    """64-bit hash (hex) of attribute names, kinds, and category lists."""
    payload = json.dumps(
        [[a.name, a.kind, list(a.nominal_values)] for a in schema],
        separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True,
                      allow_nan=False) + "\n"


@dataclass
class ModelFile:
    model: Model
    algo: str
    seed: int
    fingerprint: str


def model_document(model: Model, seed: int) -> dict:
    return {
        "format_version": MODEL_FORMAT_VERSION,
        "algo": model.kind,
        "class_values": list(model.class_values),
        "selected_attributes": [a.name for a in model.schema],
        "schema": [{"name": a.name, "kind": a.kind,
                    "nominal_values": list(a.nominal_values)} for a in model.schema],
        "schema_fingerprint": schema_fingerprint(model.schema),
        "seed": int(seed),
        "params": model.to_params(),
    }


def save_model(model: Model, path, seed: int = 0) -> None:
    text = canonical_json(model_document(model, seed))
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or Path("."), suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_model(path) -> ModelFile:
    p = Path(path)
    if not p.exists():
        raise ModelError(f"{p}: no such model file")
    try:
        doc = json.loads(p.read_text("utf-8"))
    except json.JSONDecodeError as e:
        raise ModelError(f"{p}: not a model file: {e}") from None
    version = doc.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ModelError(f"{p}: unsupported format_version {version!r}")
    try:
        schema = tuple(AttributeSchema(a["name"], a["kind"],
                                       tuple(a["nominal_values"]))
                       for a in doc["schema"])
        stored = doc["schema_fingerprint"]
        actual = schema_fingerprint(schema)
        if stored != actual:
            raise ModelError(
                f"{p}: schema fingerprint mismatch (stored {stored}, actual {actual})")
        algo = doc["algo"]
        cls = model_class_for(algo)
        model = cls.from_params(algo, doc["params"], schema,
                                tuple(doc["class_values"]))
    except (KeyError, TypeError, ValueError) as e:
        raise ModelError(f"{p}: malformed model document: {e}") from None
    return ModelFile(model=model, algo=algo, seed=int(doc.get("seed", 0)),
                     fingerprint=stored)
