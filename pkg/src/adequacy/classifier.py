"""
Logistic-regression adequacy classifier over the 7 matching features.

LEARNING POINTS:
- Full-batch gradient descent on the mean negative log-likelihood plus
  (l2 / 2) * ||w||^2; the bias is not regularized
- The objective is convex, so with a small enough learning rate the loss
  history never increases
- log(1 + exp(z)) is computed with np.logaddexp to stay finite for large |z|
- The decision threshold is fixed at 0.5 (training data is balanced)
"""

import math
from typing import List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.adequacy.features import NUM_FEATURES, extract_features
from src.adequacy.lexicon import MatchLexicon
from src.core.errors import DegenerateLabels
from src.utils.logger import setup_logger

DECISION_THRESHOLD = 0.5


class ClassifierWeights(BaseModel):
    model_config = ConfigDict(frozen=True)

    weights: Tuple[float, ...]
    bias: float

    @field_validator("weights")
    @classmethod
    def _seven_finite_weights(cls, weights: Tuple[float, ...]) -> Tuple[float, ...]:
        if len(weights) != NUM_FEATURES:
            raise ValueError(f"expected {NUM_FEATURES} weights, got {len(weights)}")
        if not all(math.isfinite(w) for w in weights):
            raise ValueError("weights must be finite")
        return weights

    @field_validator("bias")
    @classmethod
    def _finite_bias(cls, bias: float) -> float:
        if not math.isfinite(bias):
            raise ValueError("bias must be finite")
        return bias

    @classmethod
    def zeros(cls) -> "ClassifierWeights":
        return cls(weights=(0.0,) * NUM_FEATURES, bias=0.0)


class LogregHyper(BaseModel):
    lr: float = Field(0.5, ge=0)
    epochs: int = Field(500, ge=0)
    l2: float = Field(1e-4, ge=0)
    seed: int = 0
    init_scale: float = Field(0.01, ge=0)


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def logreg_loss(w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, l2: float) -> float:
    z = X @ w + b
    # -log sigmoid(z) for y=1, -log(1 - sigmoid(z)) for y=0
    nll = np.where(y == 1, np.logaddexp(0.0, -z), np.logaddexp(0.0, z))
    return float(np.mean(nll) + 0.5 * l2 * np.dot(w, w))


def fit_logreg(
    X: np.ndarray, y: np.ndarray, hyper: LogregHyper
) -> Tuple[ClassifierWeights, List[float]]:
    """
    Batch gradient descent.

    Returns:
        (weights, history) where history[e] is the loss before update e,
        followed by the final loss
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    labels = set(int(v) for v in y)
    if labels != {0, 1}:
        raise DegenerateLabels(labels)

    rng = np.random.default_rng(hyper.seed)
    w = rng.uniform(-hyper.init_scale, hyper.init_scale, size=X.shape[1])
    b = 0.0
    n = X.shape[0]
    history = []

    for _ in range(hyper.epochs):
        history.append(logreg_loss(w, b, X, y, hyper.l2))
        error = _sigmoid(X @ w + b) - y
        grad_w = X.T @ error / n + hyper.l2 * w
        grad_b = float(np.sum(error) / n)
        w = w - hyper.lr * grad_w
        b = b - hyper.lr * grad_b
    history.append(logreg_loss(w, b, X, y, hyper.l2))

    return ClassifierWeights(weights=tuple(float(v) for v in w), bias=float(b)), history


def feature_matrix(triplets: Sequence, lex: MatchLexicon) -> Tuple[np.ndarray, np.ndarray]:
    X = np.array([extract_features(t.mr, t.rf, lex) for t in triplets], dtype=np.float64)
    y = np.array([t.label for t in triplets], dtype=np.float64)
    return X.reshape(len(triplets), NUM_FEATURES), y


def train_logreg(triplets: Sequence, lex: MatchLexicon, hyper: LogregHyper) -> ClassifierWeights:
    """
    Raises:
        DegenerateLabels: the triplets carry a single label (or none)
    """
    X, y = feature_matrix(triplets, lex)
    weights, history = fit_logreg(X, y, hyper)

    logger = setup_logger("Classifier")
    accuracy = float(np.mean([predict_label(weights, f) == label for f, label in zip(X, y)]))
    logger.info(
        f"logistic regression on {len(triplets)} triplets: "
        f"loss {history[0]:.4f} -> {history[-1]:.4f}, train accuracy {accuracy:.4f}"
    )
    return weights


def predict(weights: ClassifierWeights, features: Sequence[float]) -> float:
    """P(adequate) = sigmoid(w . f + b)."""
    features = np.asarray(features, dtype=np.float64)
    if features.shape != (NUM_FEATURES,):
        raise ValueError(f"expected {NUM_FEATURES} features, got shape {features.shape}")
    z = float(np.dot(np.asarray(weights.weights), features) + weights.bias)
    return float(_sigmoid(z))


def predict_label(weights: ClassifierWeights, features: Sequence[float]) -> int:
    return int(predict(weights, features) >= DECISION_THRESHOLD)
