"""
Training loop and gradient check for the seq2seq network.

LEARNING POINTS:
- Online training: one Adam step per (source, target) pair, pairs visited
  in a seeded random order each epoch
- Gradient-norm clipping before every update
- Epoch loss is the mean cross-entropy per target character, summed with
  math.fsum so it does not depend on visiting order
- gradient_check compares sequence_loss gradients with central differences
"""

import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from src.core.errors import NonFiniteLoss
from src.model.network import sequence_loss
from src.model.params import ModelConfig, ModelParams
from src.utils.logger import setup_logger

IdPair = Tuple[Sequence[int], Sequence[int]]


class TrainHyper(BaseModel):
    lr: float = Field(1e-3, ge=0)
    epochs: int = Field(10, ge=0)
    clip_norm: float = Field(5.0, gt=0)
    seed: int = 0


class EpochStats(BaseModel):
    epoch: int
    loss: float
    char_accuracy: float

    def as_line(self) -> str:
        return f"epoch={self.epoch} loss={self.loss:.6f} char_accuracy={self.char_accuracy:.4f}"


class Adam:
    """Adam with bias correction; state keyed by tensor name."""

    def __init__(self, params: ModelParams, lr: float, beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = {name: np.zeros_like(t) for name, t in params.items()}
        self.v = {name: np.zeros_like(t) for name, t in params.items()}

    def step(self, params: ModelParams, grads: ModelParams) -> None:
        self.t += 1
        correction1 = 1.0 - self.beta1 ** self.t
        correction2 = 1.0 - self.beta2 ** self.t
        for name, grad in grads.items():
            self.m[name] = self.beta1 * self.m[name] + (1.0 - self.beta1) * grad
            self.v[name] = self.beta2 * self.v[name] + (1.0 - self.beta2) * grad * grad
            m_hat = self.m[name] / correction1
            v_hat = self.v[name] / correction2
            params[name] -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


def clip_gradients(grads: ModelParams, clip_norm: float) -> float:
    """Scale grads in place so their global norm is <= clip_norm; return the pre-clip norm."""
    norm = grads.global_norm()
    if norm > clip_norm:
        scale = clip_norm / norm
        for name, grad in grads.items():
            grads[name] = grad * scale
    return norm


class Seq2SeqTrainer:
    """
    Trains ModelParams on id-sequence pairs.

    Usage:
        trainer = Seq2SeqTrainer(config, vocab_size=len(vocab), hyper=TrainHyper(lr=1e-2))
        params = trainer.fit(pairs)
        trainer.history[-1].char_accuracy
    """

    def __init__(
        self,
        config: ModelConfig,
        vocab_size: int,
        hyper: TrainHyper,
        on_epoch: Optional[Callable[[EpochStats], None]] = None,
    ):
        self.config = config
        self.vocab_size = vocab_size
        self.hyper = hyper
        self.on_epoch = on_epoch
        self.history: List[EpochStats] = []
        self.logger = setup_logger("Trainer")

    def fit(self, pairs: Sequence[IdPair], params: Optional[ModelParams] = None) -> ModelParams:
        if not pairs:
            raise ValueError("training set is empty")

        hyper = self.hyper
        params = params.copy() if params else ModelParams.initialize(
            self.config, self.vocab_size, seed=hyper.seed
        )
        optimizer = Adam(params, lr=hyper.lr)
        rng = np.random.default_rng(hyper.seed)
        total_chars = sum(len(target) for _, target in pairs)

        self.logger.info(
            f"Training {params.num_parameters} parameters on {len(pairs)} pairs "
            f"for {hyper.epochs} epochs (lr={hyper.lr}, clip={hyper.clip_norm})"
        )

        for epoch in range(1, hyper.epochs + 1):
            losses = [0.0] * len(pairs)
            correct = 0
            for index in rng.permutation(len(pairs)):
                source, target = pairs[index]
                result = sequence_loss(params, source, target)
                if not math.isfinite(result.loss):
                    raise NonFiniteLoss(epoch, int(index), result.loss, params.all_finite())
                losses[index] = result.loss
                correct += result.correct
                clip_gradients(result.grads, hyper.clip_norm)
                optimizer.step(params, result.grads)

            stats = EpochStats(
                epoch=epoch,
                loss=math.fsum(losses) / total_chars,
                char_accuracy=correct / total_chars,
            )
            self.history.append(stats)
            self.logger.info(stats.as_line())
            if self.on_epoch:
                self.on_epoch(stats)

        return params


def held_out_stats(params: ModelParams, pairs: Sequence[IdPair]) -> Tuple[float, float]:
    """(mean loss per target character, char accuracy) with params left untouched."""
    if not pairs:
        raise ValueError("held-out set is empty")
    loss = 0.0
    correct = 0
    count = 0
    for source, target in pairs:
        result = sequence_loss(params, source, target, with_grads=False)
        loss += result.loss
        correct += result.correct
        count += result.count
    return loss / count, correct / count


def train(
    config: ModelConfig,
    pairs: Sequence[IdPair],
    hyper: TrainHyper,
    vocab_size: int,
) -> ModelParams:
    """Train from scratch and return the final parameters."""
    return Seq2SeqTrainer(config, vocab_size, hyper).fit(pairs)


# ============================================================================
# GRADIENT CHECK
# ============================================================================

def gradient_check(
    config: ModelConfig,
    pair: IdPair,
    epsilon: float = 1e-5,
    vocab_size: Optional[int] = None,
    seed: int = 0,
    max_coords: Optional[int] = None,
    params: Optional[ModelParams] = None,
    floor: float = 1e-3,
) -> float:
    """
    Max floored relative error between analytic and central-difference gradients.

    Per coordinate: |a - n| / max(|a|, |n|, floor). Where either gradient
    reaches `floor` in magnitude this is the plain relative error; below it the
    result bounds the absolute error by error * floor. Central differences
    carry about 1e-10 of noise, so near-zero gradients need the floor.
    Raising `floor` never increases the result; floor=0 gives the unfloored
    relative error (coordinates where both gradients are exactly 0 count as 0).

    Args:
        pair: (source ids, target ids ending with EOS)
        vocab_size: needed when params is not given
        max_coords: check a seeded random subset of coordinates (None = all)
    """
    if config.dtype != "float64":
        raise ValueError("gradient_check requires 64-bit precision")

    source, target = pair
    if params is None:
        if vocab_size is None:
            raise ValueError("vocab_size is required when params is not given")
        params = ModelParams.initialize(config, vocab_size, seed=seed)
    params = params.copy()
    analytic = sequence_loss(params, source, target).grads

    coords: List[Tuple[str, Tuple[int, ...]]] = [
        (name, index) for name, tensor in params.items() for index in np.ndindex(tensor.shape)
    ]
    if max_coords is not None and max_coords < len(coords):
        rng = np.random.default_rng(seed)
        picked = sorted(rng.choice(len(coords), size=max_coords, replace=False))
        coords = [coords[i] for i in picked]

    worst = 0.0
    per_tensor: Dict[str, float] = {}
    for name, index in coords:
        tensor = params[name]
        original = tensor[index]
        tensor[index] = original + epsilon
        plus = sequence_loss(params, source, target, with_grads=False).loss
        tensor[index] = original - epsilon
        minus = sequence_loss(params, source, target, with_grads=False).loss
        tensor[index] = original

        numeric = (plus - minus) / (2.0 * epsilon)
        exact = float(analytic[name][index])
        scale = max(abs(exact), abs(numeric), floor)
        error = abs(exact - numeric) / scale if scale > 0 else 0.0
        per_tensor[name] = max(per_tensor.get(name, 0.0), error)
        worst = max(worst, error)

    logger = setup_logger("Trainer")
    for name, error in per_tensor.items():
        logger.debug(f"gradient check {name}: max relative error {error:.3e}")
    return worst
