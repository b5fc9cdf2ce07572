"""
Reverse-model re-ranking.

A second seq2seq model maps an utterance back to an MR string. A candidate
that reconstructs the input MR exactly (edit distance 0) is taken to realize
it; the first such candidate in rank order is selected.

LEARNING POINTS:
- Reconstruction uses greedy decoding: deterministic and one pass per candidate
- Distances are measured against the canonical serialization of the MR
- The reconstruction function is injected, so the rule can be tested
  without a trained model
"""

from functools import lru_cache
from typing import Callable

from src.core.base_reranker import BaseReranker, RerankDecision, RerankRule
from src.core.vocab import Vocabulary
from src.model.decoding import greedy_decode
from src.model.params import ModelParams
from src.rerank.candidates import Candidates, candidate_texts
from src.rerank.levenshtein import levenshtein


def make_reconstructor(params: ModelParams, vocab: Vocabulary, max_len: int = 250) -> Callable[[str], str]:
    """Utterance -> reconstructed MR string via greedy decoding."""

    @lru_cache(maxsize=None)
    def reconstruct(utterance: str) -> str:
        ids = greedy_decode(params, vocab.encode_source(utterance), max_len)
        return vocab.decode(ids)

    return reconstruct


class ReverseReranker(BaseReranker):
    """Select the first candidate whose reconstruction equals the MR string."""

    def __init__(self, reconstruct: Callable[[str], str], mr_text: str):
        self.reconstruct = reconstruct
        self.mr_text = mr_text
        super().__init__()

    @property
    def name(self) -> str:
        return "reverse"

    @property
    def accept_rule(self) -> RerankRule:
        return RerankRule.ZERO_EDIT_DISTANCE

    def score(self, candidate: str) -> float:
        return float(levenshtein(self.reconstruct(candidate), self.mr_text))

    def accepts(self, score: float) -> bool:
        return score == 0.0


def reverse_rerank(
    nbest: Candidates,
    mr_text_canonical: str,
    reverse_params: ModelParams,
    vocab: Vocabulary,
    max_len: int = 250,
) -> RerankDecision:
    """
    Raises:
        EmptyNBest: no candidates
    """
    reconstruct = make_reconstructor(reverse_params, vocab, max_len)
    texts = candidate_texts(nbest, vocab)
    return ReverseReranker(reconstruct, mr_text_canonical).rerank(texts)
