"""
Versioned JSON checkpoints for seq2seq models and the adequacy classifier.

LEARNING POINTS:
- Values are stored as float.hex() strings, so save -> load is bit-exact
- Every tensor records its shape and dtype; value count must equal prod(shape)
- format_version is checked before anything else so old files fail loudly
- Errors are translated into the CheckpointError family at the boundary

Layout:
    {
      "format_version": 1,
      "kind": "seq2seq" | "classifier",
      "config": {...ModelConfig...} | null,
      "vocabulary": ["a", "b", ...],          # non-reserved chars by id
      "tensors": {"embedding": {"shape": [V, E], "dtype": "float64", "values": [...]}},
      "classifier": {"weights": [...], "bias": "..."} | null,
      "metadata": {...}
    }
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from src.adequacy.classifier import ClassifierWeights
from src.core.errors import CheckpointIOError, CorruptCheckpoint, VersionMismatch
from src.core.vocab import Vocabulary
from src.model.params import ModelConfig, ModelParams, parameter_shapes

CHECKPOINT_FORMAT_VERSION = 1

PathLike = Union[str, Path]


class TensorRecord(BaseModel):
    shape: List[int]
    dtype: Literal["float64", "float32"] = "float64"
    values: List[str]

    @classmethod
    def from_array(cls, array: np.ndarray) -> "TensorRecord":
        return cls(
            shape=list(array.shape),
            dtype=str(array.dtype),
            values=[float(v).hex() for v in array.ravel()],
        )

    def to_array(self) -> np.ndarray:
        flat = np.array([float.fromhex(v) for v in self.values], dtype=np.float64)
        return flat.astype(self.dtype).reshape(self.shape)


class ClassifierRecord(BaseModel):
    weights: List[str]
    bias: str


class Checkpoint(BaseModel):
    format_version: int = CHECKPOINT_FORMAT_VERSION
    kind: Literal["seq2seq", "classifier"] = "seq2seq"
    config: Optional[ModelConfig] = None
    vocabulary: List[str] = Field(default_factory=list)
    tensors: Dict[str, TensorRecord] = Field(default_factory=dict)
    classifier: Optional[ClassifierRecord] = None
    metadata: Dict[str, Any] = Field(default_factory=dict)

    def check_integrity(self) -> None:
        """Raise CorruptCheckpoint when a tensor's value count disagrees with its shape."""
        for name, record in self.tensors.items():
            expected = math.prod(record.shape)
            if len(record.values) != expected:
                raise CorruptCheckpoint(
                    f"tensor {name!r}: shape {record.shape} needs {expected} values, "
                    f"found {len(record.values)}"
                )


# ============================================================================
# SAVE / LOAD
# ============================================================================

def checkpoint_to_json(cp: Checkpoint) -> str:
    return cp.model_dump_json(indent=1) + "\n"


def checkpoint_from_json(text: str) -> Checkpoint:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise CorruptCheckpoint(f"not valid JSON: {e}") from e
    if not isinstance(raw, dict):
        raise CorruptCheckpoint("checkpoint root must be an object")

    version = raw.get("format_version")
    if version != CHECKPOINT_FORMAT_VERSION:
        raise VersionMismatch(version, CHECKPOINT_FORMAT_VERSION)

    try:
        cp = Checkpoint.model_validate(raw)
    except ValidationError as e:
        raise CorruptCheckpoint(str(e)) from e
    cp.check_integrity()
    return cp


def save_checkpoint(cp: Checkpoint, path: PathLike) -> None:
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(checkpoint_to_json(cp), encoding="utf-8")
    except OSError as e:
        raise CheckpointIOError(f"cannot write {path}: {e}") from e


def load_checkpoint(path: PathLike) -> Checkpoint:
    """
    Raises:
        VersionMismatch: unknown format_version
        CorruptCheckpoint: bad JSON, bad schema or inconsistent tensor sizes
        CheckpointIOError: the file cannot be read
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise CheckpointIOError(f"cannot read {path}: {e}") from e
    return checkpoint_from_json(text)


# ============================================================================
# MODEL / CLASSIFIER CONVERSION
# ============================================================================

def checkpoint_from_model(
    params: ModelParams, vocab: Vocabulary, metadata: Optional[Dict[str, Any]] = None
) -> Checkpoint:
    return Checkpoint(
        kind="seq2seq",
        config=params.config,
        vocabulary=list(vocab.chars),
        tensors={name: TensorRecord.from_array(t) for name, t in params.items()},
        metadata=dict(metadata or {}),
    )


def model_from_checkpoint(cp: Checkpoint) -> Tuple[ModelParams, Vocabulary]:
    if cp.kind != "seq2seq" or cp.config is None:
        raise CorruptCheckpoint(f"expected a seq2seq checkpoint, found kind={cp.kind!r}")

    vocab = Vocabulary(chars=tuple(cp.vocabulary))
    expected = parameter_shapes(cp.config, len(vocab))
    if set(expected) != set(cp.tensors):
        missing = sorted(set(expected) - set(cp.tensors))
        extra = sorted(set(cp.tensors) - set(expected))
        raise CorruptCheckpoint(f"tensor names disagree with config: missing={missing} extra={extra}")

    tensors = {}
    for name, shape in expected.items():
        array = cp.tensors[name].to_array()
        if tuple(array.shape) != shape:
            raise CorruptCheckpoint(f"tensor {name!r} has shape {array.shape}, expected {shape}")
        tensors[name] = array
    return ModelParams(config=cp.config, vocab_size=len(vocab), tensors=tensors), vocab


def checkpoint_from_classifier(
    weights: ClassifierWeights, metadata: Optional[Dict[str, Any]] = None
) -> Checkpoint:
    return Checkpoint(
        kind="classifier",
        classifier=ClassifierRecord(
            weights=[float(w).hex() for w in weights.weights],
            bias=float(weights.bias).hex(),
        ),
        metadata=dict(metadata or {}),
    )


def classifier_from_checkpoint(cp: Checkpoint) -> ClassifierWeights:
    if cp.kind != "classifier" or cp.classifier is None:
        raise CorruptCheckpoint(f"expected a classifier checkpoint, found kind={cp.kind!r}")
    try:
        return ClassifierWeights(
            weights=tuple(float.fromhex(w) for w in cp.classifier.weights),
            bias=float.fromhex(cp.classifier.bias),
        )
    except (ValueError, ValidationError) as e:
        raise CorruptCheckpoint(f"invalid classifier section: {e}") from e
