"""
Shared by DecodeStage and RerankStage: load what a rerank mode needs and
build the matching re-ranker for one MR.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Sequence

from src.adequacy.classifier import ClassifierWeights
from src.adequacy.lexicon import MatchLexicon, load_lexicon
from src.core.base_reranker import BaseReranker, RerankDecision
from src.core.errors import MissingCheckpoint
from src.core.mr import MeaningRepresentation, serialize_mr
from src.core.vocab import Vocabulary
from src.model.params import ModelParams
from src.rerank.classifier import ClassifierReranker
from src.rerank.forward import ForwardReranker
from src.rerank.reverse import ReverseReranker, make_reconstructor
from src.tools.checkpoint import classifier_from_checkpoint, load_checkpoint, model_from_checkpoint
from src.utils.config import Settings


@dataclass
class RerankResources:
    mode: str
    reverse_params: Optional[ModelParams] = None
    reverse_vocab: Optional[Vocabulary] = None
    weights: Optional[ClassifierWeights] = None
    lexicon: Optional[MatchLexicon] = None
    max_reverse_len: int = 250

    def reranker_for(self, mr: MeaningRepresentation) -> BaseReranker:
        if self.mode == "reverse":
            reconstruct = make_reconstructor(self.reverse_params, self.reverse_vocab, self.max_reverse_len)
            return ReverseReranker(reconstruct, serialize_mr(mr))
        if self.mode == "classifier":
            return ClassifierReranker(mr, self.weights, self.lexicon)
        return ForwardReranker()

    def select(self, mr: MeaningRepresentation, candidates: Sequence[str]) -> RerankDecision:
        return self.reranker_for(mr).rerank(candidates)


def lexicon_paths(settings: Settings) -> Dict[str, Path]:
    """A configured lexicon must exist before work starts; unset means the shipped file."""
    if settings.lexicon_path is None:
        return {}
    return {"lexicon_path": settings.lexicon_path}


def mode_paths(settings: Settings) -> Dict[str, Path]:
    """Input files the rerank mode reads besides its checkpoints."""
    return lexicon_paths(settings) if settings.mode == "classifier" else {}


def mode_checkpoints(settings: Settings) -> Dict[str, Path]:
    """Checkpoints the configured rerank mode needs besides the forward model."""
    if settings.mode == "reverse":
        return {"reverse": settings.checkpoint_path("reverse")}
    if settings.mode == "classifier":
        return {"classifier": settings.checkpoint_path("classifier")}
    return {}


def check_checkpoints(settings: Settings, needed: Dict[str, Path]) -> None:
    """
    Raises:
        MissingCheckpoint: a needed checkpoint file does not exist
    """
    for _, path in needed.items():
        if not Path(path).is_file():
            raise MissingCheckpoint(settings.mode, path)


def load_resources(settings: Settings) -> RerankResources:
    resources = RerankResources(mode=settings.mode, max_reverse_len=settings.max_reverse_len)
    if settings.mode == "reverse":
        resources.reverse_params, resources.reverse_vocab = model_from_checkpoint(
            load_checkpoint(settings.checkpoint_path("reverse"))
        )
    elif settings.mode == "classifier":
        resources.weights = classifier_from_checkpoint(
            load_checkpoint(settings.checkpoint_path("classifier"))
        )
        resources.lexicon = load_lexicon(settings.lexicon_path, settings.literal_fallback)
    return resources


def decision_line(index: int, mr: MeaningRepresentation, decision: RerankDecision) -> str:
    return f"{index}\t{serialize_mr(mr)}\t{decision.as_line()}"
