"""
Character-level attentional encoder-decoder (numpy).

LEARNING POINTS:
- Bidirectional GRU encoder; h_j = [forward_j ; backward_j]
- Additive attention: e_j = v . tanh(W s + U h_j), alpha = softmax(e),
  c = sum_j alpha_j h_j, queried with the previous top decoder state
- The context feeds both the first decoder GRU layer (next to the char
  embedding) and the output projection
- Decoder initial state of each layer is a learned linear map of
  [last forward state ; first backward state]
- sequence_loss() runs the teacher-forced forward pass with caches and
  backpropagates by hand; the gradient check verifies it

GRU (gates stacked [z; r; n] in W, U, b):
    z  = sigmoid(Wz x + Uz h + bz)
    r  = sigmoid(Wr x + Ur h + br)
    n  = tanh(Wn x + Un (r * h) + bn)
    h' = (1 - z) * n + z * h
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.core.errors import EmptySequence, IdOutOfRange
from src.core.vocab import BOS_ID
from src.model.params import ModelParams

DecoderState = Tuple[np.ndarray, ...]


# ============================================================================
# ELEMENTARY FUNCTIONS
# ============================================================================

def sigmoid(x: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - np.max(logits)
    return shifted - np.log(np.sum(np.exp(shifted)))


def softmax(scores: np.ndarray) -> np.ndarray:
    shifted = np.exp(scores - np.max(scores))
    return shifted / np.sum(shifted)


# ============================================================================
# GRU CELL
# ============================================================================

@dataclass
class GRUCache:
    x: np.ndarray
    h: np.ndarray
    z: np.ndarray
    r: np.ndarray
    n: np.ndarray
    hr: np.ndarray


def gru_forward(
    W: np.ndarray, U: np.ndarray, b: np.ndarray, x: np.ndarray, h: np.ndarray
) -> Tuple[np.ndarray, GRUCache]:
    H = h.shape[0]
    gx = W @ x + b
    zr = sigmoid(gx[: 2 * H] + U[: 2 * H] @ h)
    z, r = zr[:H], zr[H:]
    hr = r * h
    n = np.tanh(gx[2 * H:] + U[2 * H:] @ hr)
    h_new = (1.0 - z) * n + z * h
    return h_new, GRUCache(x=x, h=h, z=z, r=r, n=n, hr=hr)


def gru_backward(
    W: np.ndarray,
    U: np.ndarray,
    cache: GRUCache,
    dh_new: np.ndarray,
    dW: np.ndarray,
    dU: np.ndarray,
    db: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray]:
    """Accumulate parameter grads in place; return (dx, dh_prev)."""
    H = cache.h.shape[0]
    z, r, n, h = cache.z, cache.r, cache.n, cache.h

    dn = dh_new * (1.0 - z)
    dz = dh_new * (h - n)
    dh = dh_new * z

    da_n = dn * (1.0 - n * n)
    dhr = U[2 * H:].T @ da_n
    dh += dhr * r
    da_r = dhr * h * r * (1.0 - r)
    da_z = dz * z * (1.0 - z)

    da = np.concatenate([da_z, da_r, da_n])
    dW += np.outer(da, cache.x)
    db += da
    dU[: 2 * H] += np.outer(da[: 2 * H], h)
    dU[2 * H:] += np.outer(da_n, cache.hr)
    dh += U[: 2 * H].T @ da[: 2 * H]
    return W.T @ da, dh


# ============================================================================
# ENCODER
# ============================================================================

def _check_ids(params: ModelParams, ids: Sequence[int]) -> None:
    for token in ids:
        if not 0 <= token < params.vocab_size:
            raise IdOutOfRange(token, params.vocab_size)


def _encode_with_cache(
    params: ModelParams, source_ids: Sequence[int]
) -> Tuple[np.ndarray, List[Tuple[List[GRUCache], List[GRUCache]]]]:
    if len(source_ids) == 0:
        raise EmptySequence("source")
    _check_ids(params, source_ids)

    H = params.config.hidden_dim
    n = len(source_ids)
    dtype = params["embedding"].dtype
    inputs = params["embedding"][list(source_ids)]
    caches = []

    for layer in range(params.config.encoder_layers):
        outputs = np.zeros((n, 2 * H), dtype=dtype)
        fwd_caches: List[GRUCache] = []
        bwd_caches: List[Optional[GRUCache]] = [None] * n

        prefix = f"enc_fwd_{layer}"
        W, U, b = params[f"{prefix}_W"], params[f"{prefix}_U"], params[f"{prefix}_b"]
        h = np.zeros(H, dtype=dtype)
        for t in range(n):
            h, cache = gru_forward(W, U, b, inputs[t], h)
            outputs[t, :H] = h
            fwd_caches.append(cache)

        prefix = f"enc_bwd_{layer}"
        W, U, b = params[f"{prefix}_W"], params[f"{prefix}_U"], params[f"{prefix}_b"]
        h = np.zeros(H, dtype=dtype)
        for t in reversed(range(n)):
            h, cache = gru_forward(W, U, b, inputs[t], h)
            outputs[t, H:] = h
            bwd_caches[t] = cache

        caches.append((fwd_caches, bwd_caches))
        inputs = outputs

    return inputs, caches


def encode(params: ModelParams, source_ids: Sequence[int]) -> np.ndarray:
    """
    Run the bidirectional encoder.

    Returns:
        (n, 2H) array; row j is [forward state j ; backward state j]

    Raises:
        IdOutOfRange: a source id outside the vocabulary
        EmptySequence: no source ids
    """
    states, _ = _encode_with_cache(params, source_ids)
    return states


def project_keys(params: ModelParams, encoder_states: np.ndarray) -> np.ndarray:
    """U h_j for every encoder position; reused across decode steps."""
    return encoder_states @ params["att_U"].T


def initial_state(params: ModelParams, encoder_states: np.ndarray) -> DecoderState:
    H = params.config.hidden_dim
    final = np.concatenate([encoder_states[-1, :H], encoder_states[0, H:]])
    return tuple(
        params[f"init_{layer}_W"] @ final + params[f"init_{layer}_b"]
        for layer in range(params.config.decoder_layers)
    )


# ============================================================================
# ATTENTION
# ============================================================================

def attend(
    params: ModelParams,
    decoder_state: np.ndarray,
    encoder_states: np.ndarray,
    keys: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Additive attention.

    Args:
        decoder_state: query vector (previous top-layer decoder state)
        encoder_states: (n, 2H)
        keys: optional precomputed project_keys(params, encoder_states)

    Returns:
        (context (2H,), weights (n,)); weights sum to 1
    """
    if keys is None:
        keys = project_keys(params, encoder_states)
    hidden = np.tanh(params["att_W"] @ decoder_state + keys)
    weights = softmax(hidden @ params["att_v"])
    return weights @ encoder_states, weights


# ============================================================================
# DECODER
# ============================================================================

def decode_step(
    params: ModelParams,
    prev_id: int,
    decoder_state: DecoderState,
    encoder_states: np.ndarray,
    keys: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, DecoderState]:
    """
    One decoder step.

    Returns:
        (log-probabilities over the vocabulary, next decoder state)
    """
    if not 0 <= prev_id < params.vocab_size:
        raise IdOutOfRange(prev_id, params.vocab_size)

    context, _ = attend(params, decoder_state[-1], encoder_states, keys)
    x = np.concatenate([params["embedding"][prev_id], context])
    new_state = []
    for layer, h in enumerate(decoder_state):
        prefix = f"dec_{layer}"
        x, _ = gru_forward(params[f"{prefix}_W"], params[f"{prefix}_U"], params[f"{prefix}_b"], x, h)
        new_state.append(x)
    logits = params["out_W"] @ np.concatenate([x, context]) + params["out_b"]
    return log_softmax(logits), tuple(new_state)


# ============================================================================
# TEACHER-FORCED LOSS + BACKPROP
# ============================================================================

@dataclass
class _StepCache:
    prev_id: int
    target_id: int
    query: np.ndarray
    hidden: np.ndarray
    weights: np.ndarray
    context: np.ndarray
    grus: List[GRUCache]
    output: np.ndarray
    probs: np.ndarray


@dataclass
class LossResult:
    """Teacher-forced loss over one (source, target) pair."""

    loss: float
    correct: int
    count: int
    grads: Optional[ModelParams] = field(default=None, repr=False)


def sequence_loss(
    params: ModelParams,
    source_ids: Sequence[int],
    target_ids: Sequence[int],
    loss_scale: float = 1.0,
    with_grads: bool = True,
) -> LossResult:
    """
    Total cross-entropy of target_ids given source_ids (target ends with EOS).

    The first decoder input is BOS, then the gold previous character.
    `loss` is unscaled; gradients are of loss_scale * loss.
    """
    if len(target_ids) == 0:
        raise EmptySequence("target")
    _check_ids(params, target_ids)

    cfg = params.config
    H, E, L = cfg.hidden_dim, cfg.embed_dim, cfg.decoder_layers
    enc_states, enc_caches = _encode_with_cache(params, source_ids)
    keys = project_keys(params, enc_states)
    final = np.concatenate([enc_states[-1, :H], enc_states[0, H:]])
    state = initial_state(params, enc_states)

    loss = 0.0
    correct = 0
    steps: List[_StepCache] = []
    prev = BOS_ID
    for target in target_ids:
        query = state[-1]
        hidden = np.tanh(params["att_W"] @ query + keys)
        weights = softmax(hidden @ params["att_v"])
        context = weights @ enc_states

        x = np.concatenate([params["embedding"][prev], context])
        new_state = []
        grus = []
        for layer in range(L):
            prefix = f"dec_{layer}"
            x, cache = gru_forward(
                params[f"{prefix}_W"], params[f"{prefix}_U"], params[f"{prefix}_b"], x, state[layer]
            )
            new_state.append(x)
            grus.append(cache)

        output = np.concatenate([x, context])
        logp = log_softmax(params["out_W"] @ output + params["out_b"])
        loss -= float(logp[target])
        correct += int(np.argmax(logp) == target)

        if with_grads:
            steps.append(_StepCache(
                prev_id=prev, target_id=target, query=query, hidden=hidden,
                weights=weights, context=context, grus=grus, output=output,
                probs=np.exp(logp),
            ))
        state = tuple(new_state)
        prev = target

    if not with_grads:
        return LossResult(loss=loss, correct=correct, count=len(target_ids))

    grads = params.zeros_like()
    g = grads.tensors
    d_enc = np.zeros_like(enc_states)
    d_state = [np.zeros(H, dtype=enc_states.dtype) for _ in range(L)]

    for step in reversed(steps):
        d_logits = step.probs.copy()
        d_logits[step.target_id] -= 1.0
        d_logits *= loss_scale
        g["out_W"] += np.outer(d_logits, step.output)
        g["out_b"] += d_logits
        d_output = params["out_W"].T @ d_logits

        d_new = [d.copy() for d in d_state]
        d_new[-1] += d_output[:H]
        d_context = d_output[H:].copy()

        d_prev: List[np.ndarray] = [None] * L
        for layer in reversed(range(L)):
            prefix = f"dec_{layer}"
            dx, d_prev[layer] = gru_backward(
                params[f"{prefix}_W"], params[f"{prefix}_U"], step.grus[layer], d_new[layer],
                g[f"{prefix}_W"], g[f"{prefix}_U"], g[f"{prefix}_b"],
            )
            if layer > 0:
                d_new[layer - 1] += dx
            else:
                g["embedding"][step.prev_id] += dx[:E]
                d_context += dx[E:]

        d_prev[-1] = d_prev[-1] + _attention_backward(
            params, g, step, enc_states, d_context, d_enc
        )
        d_state = d_prev

    d_final = np.zeros(2 * H, dtype=enc_states.dtype)
    for layer in range(L):
        g[f"init_{layer}_W"] += np.outer(d_state[layer], final)
        g[f"init_{layer}_b"] += d_state[layer]
        d_final += params[f"init_{layer}_W"].T @ d_state[layer]
    d_enc[-1, :H] += d_final[:H]
    d_enc[0, H:] += d_final[H:]

    _encoder_backward(params, g, source_ids, enc_caches, d_enc)
    return LossResult(loss=loss, correct=correct, count=len(target_ids), grads=grads)


def _attention_backward(
    params: ModelParams,
    g: dict,
    step: _StepCache,
    enc_states: np.ndarray,
    d_context: np.ndarray,
    d_enc: np.ndarray,
) -> np.ndarray:
    """Accumulate attention grads; return the gradient w.r.t. the query."""
    weights, hidden = step.weights, step.hidden
    d_weights = enc_states @ d_context
    d_enc += np.outer(weights, d_context)

    d_scores = weights * (d_weights - weights @ d_weights)
    g["att_v"] += hidden.T @ d_scores
    d_pre = np.outer(d_scores, params["att_v"]) * (1.0 - hidden * hidden)

    d_query_proj = d_pre.sum(axis=0)
    g["att_W"] += np.outer(d_query_proj, step.query)
    g["att_U"] += d_pre.T @ enc_states
    d_enc += d_pre @ params["att_U"]
    return params["att_W"].T @ d_query_proj


def _encoder_backward(
    params: ModelParams,
    g: dict,
    source_ids: Sequence[int],
    caches: List[Tuple[List[GRUCache], List[GRUCache]]],
    d_out: np.ndarray,
) -> None:
    H = params.config.hidden_dim
    n = d_out.shape[0]

    for layer in reversed(range(len(caches))):
        fwd_caches, bwd_caches = caches[layer]
        in_dim = fwd_caches[0].x.shape[0]
        d_in = np.zeros((n, in_dim), dtype=d_out.dtype)

        prefix = f"enc_fwd_{layer}"
        carry = np.zeros(H, dtype=d_out.dtype)
        for t in reversed(range(n)):
            dx, carry = gru_backward(
                params[f"{prefix}_W"], params[f"{prefix}_U"], fwd_caches[t], d_out[t, :H] + carry,
                g[f"{prefix}_W"], g[f"{prefix}_U"], g[f"{prefix}_b"],
            )
            d_in[t] += dx

        prefix = f"enc_bwd_{layer}"
        carry = np.zeros(H, dtype=d_out.dtype)
        for t in range(n):
            dx, carry = gru_backward(
                params[f"{prefix}_W"], params[f"{prefix}_U"], bwd_caches[t], d_out[t, H:] + carry,
                g[f"{prefix}_W"], g[f"{prefix}_U"], g[f"{prefix}_b"],
            )
            d_in[t] += dx

        d_out = d_in

    for t, token in enumerate(source_ids):
        g["embedding"][token] += d_out[t]


def score_sequence(
    params: ModelParams, source_ids: Sequence[int], target_ids: Sequence[int]
) -> float:
    """
    Sum of log P(target_t | target_<t, source), replayed with decode_step.

    Accumulates in the same order as beam search, so a hypothesis' raw
    score and its replay agree.
    """
    encoder_states = encode(params, source_ids)
    keys = project_keys(params, encoder_states)
    state = initial_state(params, encoder_states)
    total = 0.0
    prev = BOS_ID
    for target in target_ids:
        logp, state = decode_step(params, prev, state, encoder_states, keys)
        total = total + float(logp[target])
        prev = target
    return total


def teacher_forced_accuracy(
    params: ModelParams, pairs: Sequence[Tuple[Sequence[int], Sequence[int]]]
) -> float:
    correct = 0
    count = 0
    for source, target in pairs:
        result = sequence_loss(params, source, target, with_grads=False)
        correct += result.correct
        count += result.count
    return correct / count if count else math.nan
