"""
Decoding: length penalty, beam search, greedy search.

LEARNING POINTS:
- Raw score = sum of log-probabilities (always <= 0)
- Normalized score = raw / lp(|Y|), lp(n) = ((5 + n) / 6) ** alpha
- |Y| counts the EOS token of a finished hypothesis
- Beam search expands every live hypothesis over the full vocabulary,
  keeps the top `beam_width` candidates by raw score, and moves the ones
  ending in EOS to a finished pool
- Candidate order (parent rank, token id) plus a stable sort makes every
  tie-break deterministic, so beam_width=1 reproduces greedy search
"""

from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence

import numpy as np

from src.core.vocab import BOS_ID, EOS_ID, Vocabulary
from src.model.network import DecoderState, decode_step, encode, initial_state, project_keys
from src.model.params import ModelParams


def length_penalty(length: int, alpha: float) -> float:
    """((5 + length) / 6) ** alpha; equals 1 for alpha = 0 or length = 1."""
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    if alpha == 0:
        return 1.0
    return ((5.0 + length) / 6.0) ** alpha


@dataclass
class BeamHypothesis:
    """A partial or complete decoded sequence (tokens exclude EOS)."""

    tokens: tuple
    raw_score: float
    normalized_score: float
    finished: bool
    finish_step: int = 0
    order: int = 0
    state: Optional[DecoderState] = field(default=None, repr=False, compare=False)

    @property
    def length(self) -> int:
        """|Y|: emitted tokens plus the EOS of a finished hypothesis."""
        return len(self.tokens) + (1 if self.finished else 0)

    def scored_ids(self) -> List[int]:
        """Token ids whose log-probabilities make up raw_score."""
        return list(self.tokens) + ([EOS_ID] if self.finished else [])


class NBestList:
    """Hypotheses sorted by normalized score, ties by finish step then insertion order."""

    def __init__(self, hypotheses: Sequence[BeamHypothesis]):
        self.hypotheses: List[BeamHypothesis] = sorted(
            hypotheses, key=lambda h: (-h.normalized_score, h.finish_step, h.order)
        )

    def __len__(self) -> int:
        return len(self.hypotheses)

    def __getitem__(self, index: int) -> BeamHypothesis:
        return self.hypotheses[index]

    def __iter__(self) -> Iterator[BeamHypothesis]:
        return iter(self.hypotheses)

    @property
    def best(self) -> BeamHypothesis:
        return self.hypotheses[0]

    def texts(self, vocab: Vocabulary) -> List[str]:
        return [vocab.decode(h.tokens) for h in self.hypotheses]


def _hypothesis(
    tokens: tuple, raw: float, finished: bool, step: int, order: int, alpha: float,
    state: Optional[DecoderState] = None,
) -> BeamHypothesis:
    length = len(tokens) + (1 if finished else 0)
    return BeamHypothesis(
        tokens=tokens,
        raw_score=raw,
        normalized_score=raw / length_penalty(max(length, 1), alpha),
        finished=finished,
        finish_step=step,
        order=order,
        state=state,
    )


def beam_search(
    params: ModelParams,
    source_ids: Sequence[int],
    beam_width: int,
    alpha: float,
    max_len: int,
) -> NBestList:
    """
    Length-normalized beam search.

    Stops when the finished pool holds beam_width hypotheses, when no live
    hypothesis is left, or after max_len steps. When nothing finished, the
    live hypotheses are returned unfinished.
    """
    if beam_width < 1:
        raise ValueError(f"beam_width must be >= 1, got {beam_width}")
    if max_len < 1:
        raise ValueError(f"max_len must be >= 1, got {max_len}")

    encoder_states = encode(params, source_ids)
    keys = project_keys(params, encoder_states)
    vocab_size = params.vocab_size

    live = [_hypothesis((), 0.0, False, 0, 0, alpha, initial_state(params, encoder_states))]
    finished: List[BeamHypothesis] = []
    order = 1
    step = 0

    while step < max_len and live and len(finished) < beam_width:
        step += 1
        expansions = []
        candidate_scores = []
        for hyp in live:
            prev = hyp.tokens[-1] if hyp.tokens else BOS_ID
            logp, new_state = decode_step(params, prev, hyp.state, encoder_states, keys)
            expansions.append(new_state)
            candidate_scores.append(hyp.raw_score + logp.astype(np.float64))

        scores = np.concatenate(candidate_scores)
        survivors = np.argsort(-scores, kind="stable")[:beam_width]

        next_live = []
        for flat in survivors:
            parent_index, token = divmod(int(flat), vocab_size)
            parent = live[parent_index]
            raw = float(scores[flat])
            if token == EOS_ID:
                if len(finished) < beam_width:
                    finished.append(_hypothesis(parent.tokens, raw, True, step, order, alpha))
            else:
                next_live.append(_hypothesis(
                    parent.tokens + (token,), raw, False, step, order, alpha,
                    expansions[parent_index],
                ))
            order += 1
        live = next_live

    if not finished:
        finished = [
            _hypothesis(h.tokens, h.raw_score, False, max_len, h.order, alpha) for h in live
        ]
    return NBestList(finished)


def greedy_decode(params: ModelParams, source_ids: Sequence[int], max_len: int) -> List[int]:
    """Argmax at each step until EOS or max_len; returned ids exclude EOS."""
    encoder_states = encode(params, source_ids)
    keys = project_keys(params, encoder_states)
    state = initial_state(params, encoder_states)
    tokens: List[int] = []
    prev = BOS_ID
    for _ in range(max_len):
        logp, state = decode_step(params, prev, state, encoder_states, keys)
        token = int(np.argmax(logp))
        if token == EOS_ID:
            break
        tokens.append(token)
        prev = token
    return tokens
