"""Classifier re-ranking: first candidate judged adequate (P >= 0.5) wins."""

from typing import Optional

from src.adequacy.classifier import DECISION_THRESHOLD, ClassifierWeights, predict
from src.adequacy.features import extract_features
from src.adequacy.lexicon import MatchLexicon
from src.core.base_reranker import BaseReranker, RerankDecision, RerankRule
from src.core.mr import MeaningRepresentation
from src.core.vocab import Vocabulary
from src.rerank.candidates import Candidates, candidate_texts


class ClassifierReranker(BaseReranker):
    def __init__(self, mr: MeaningRepresentation, weights: ClassifierWeights, lex: MatchLexicon):
        self.mr = mr
        self.weights = weights
        self.lex = lex
        super().__init__()

    @property
    def name(self) -> str:
        return "classifier"

    @property
    def accept_rule(self) -> RerankRule:
        return RerankRule.CLASSIFIER_ACCEPT

    def score(self, candidate: str) -> float:
        return predict(self.weights, extract_features(self.mr, candidate, self.lex))

    def accepts(self, score: float) -> bool:
        return score >= DECISION_THRESHOLD


def classifier_rerank(
    nbest: Candidates,
    mr: MeaningRepresentation,
    weights: ClassifierWeights,
    lex: MatchLexicon,
    vocab: Optional[Vocabulary] = None,
) -> RerankDecision:
    """vocab is only needed when nbest is an NBestList of token ids."""
    texts = candidate_texts(nbest, vocab)
    return ClassifierReranker(mr, weights, lex).rerank(texts)
