"""
Model configuration and parameter storage for the char-level seq2seq network.

LEARNING POINTS:
- ModelConfig is a validated pydantic model; ModelParams is a plain
  dataclass around a name -> numpy array dictionary
- parameter_shapes() is the single source of truth for tensor names/shapes,
  used by initialization, checkpoints and the gradient check
- Every tensor is initialized uniform(-init_scale, init_scale) from one
  seeded generator, in a fixed name order, so init is reproducible

Tensor layout (E = embed_dim, H = hidden_dim, A = attention dim = H, V = vocab):
    embedding               (V, E)
    enc_{fwd,bwd}_{l}_W     (3H, E or 2H)    gates stacked as [z; r; n]
    enc_{fwd,bwd}_{l}_U     (3H, H)
    enc_{fwd,bwd}_{l}_b     (3H,)
    init_{l}_W / init_{l}_b (H, 2H) / (H,)   decoder initial state of layer l
    dec_{l}_W               (3H, E + 2H or H)
    dec_{l}_U / dec_{l}_b   (3H, H) / (3H,)
    att_W / att_U / att_v   (A, H) / (A, 2H) / (A,)
    out_W / out_b           (V, 3H) / (V,)
"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, Literal, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class ModelConfig(BaseModel):
    """Network hyper-parameters; defaults mirror the best reported run."""

    model_config = ConfigDict(frozen=True)

    embed_dim: int = Field(32, ge=1)
    hidden_dim: int = Field(64, ge=1)
    encoder_layers: int = Field(1, ge=1)
    decoder_layers: int = Field(2, ge=1)
    cell: Literal["gru"] = "gru"
    attention: Literal["additive"] = "additive"
    max_decode_len: int = Field(350, ge=1)
    dtype: Literal["float64", "float32"] = "float64"
    init_scale: float = Field(0.08, gt=0)

    @property
    def attention_dim(self) -> int:
        return self.hidden_dim


def parameter_shapes(config: ModelConfig, vocab_size: int) -> Dict[str, Tuple[int, ...]]:
    E, H, V = config.embed_dim, config.hidden_dim, vocab_size
    A = config.attention_dim
    shapes: Dict[str, Tuple[int, ...]] = {"embedding": (V, E)}

    for layer in range(config.encoder_layers):
        in_dim = E if layer == 0 else 2 * H
        for direction in ("fwd", "bwd"):
            prefix = f"enc_{direction}_{layer}"
            shapes[f"{prefix}_W"] = (3 * H, in_dim)
            shapes[f"{prefix}_U"] = (3 * H, H)
            shapes[f"{prefix}_b"] = (3 * H,)

    for layer in range(config.decoder_layers):
        shapes[f"init_{layer}_W"] = (H, 2 * H)
        shapes[f"init_{layer}_b"] = (H,)

    for layer in range(config.decoder_layers):
        in_dim = E + 2 * H if layer == 0 else H
        shapes[f"dec_{layer}_W"] = (3 * H, in_dim)
        shapes[f"dec_{layer}_U"] = (3 * H, H)
        shapes[f"dec_{layer}_b"] = (3 * H,)

    shapes["att_W"] = (A, H)
    shapes["att_U"] = (A, 2 * H)
    shapes["att_v"] = (A,)
    shapes["out_W"] = (V, 3 * H)
    shapes["out_b"] = (V,)
    return shapes


@dataclass
class ModelParams:
    """All dense weights of encoder, decoder, attention, embeddings and projections."""

    config: ModelConfig
    vocab_size: int
    tensors: Dict[str, np.ndarray] = field(default_factory=dict)

    @classmethod
    def initialize(cls, config: ModelConfig, vocab_size: int, seed: int = 0) -> "ModelParams":
        rng = np.random.default_rng(seed)
        scale = config.init_scale
        tensors = {
            name: rng.uniform(-scale, scale, size=shape).astype(config.dtype)
            for name, shape in parameter_shapes(config, vocab_size).items()
        }
        return cls(config=config, vocab_size=vocab_size, tensors=tensors)

    @classmethod
    def zeros(cls, config: ModelConfig, vocab_size: int) -> "ModelParams":
        tensors = {
            name: np.zeros(shape, dtype=config.dtype)
            for name, shape in parameter_shapes(config, vocab_size).items()
        }
        return cls(config=config, vocab_size=vocab_size, tensors=tensors)

    def zeros_like(self) -> "ModelParams":
        return ModelParams(
            config=self.config,
            vocab_size=self.vocab_size,
            tensors={name: np.zeros_like(t) for name, t in self.tensors.items()},
        )

    def copy(self) -> "ModelParams":
        return ModelParams(
            config=self.config,
            vocab_size=self.vocab_size,
            tensors={name: t.copy() for name, t in self.tensors.items()},
        )

    def __getitem__(self, name: str) -> np.ndarray:
        return self.tensors[name]

    def __setitem__(self, name: str, value: np.ndarray) -> None:
        self.tensors[name] = value

    def items(self) -> Iterator[Tuple[str, np.ndarray]]:
        return iter(self.tensors.items())

    @property
    def num_parameters(self) -> int:
        return int(sum(t.size for t in self.tensors.values()))

    def global_norm(self) -> float:
        return float(np.sqrt(sum(float(np.sum(t * t)) for t in self.tensors.values())))

    def all_finite(self) -> bool:
        return all(bool(np.all(np.isfinite(t))) for t in self.tensors.values())
