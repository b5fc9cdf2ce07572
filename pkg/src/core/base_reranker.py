"""
BaseReranker - Abstract base class for n-best re-rankers

LEARNING POINTS:
- Template Method Pattern: rerank() fixes the scan, subclasses supply the
  per-candidate score and the acceptance test
- Every re-ranker shares the same fallback: if no candidate is accepted,
  keep the forward model's top-ranked hypothesis
- The decision carries per-candidate diagnostics so the choice can be audited

Workflow:
1. Score every candidate in rank order
2. Pick the first accepted candidate
3. Otherwise fall back to rank 0
"""

from abc import ABC, abstractmethod
from enum import Enum
from typing import Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from src.core.errors import EmptyNBest
from src.utils.logger import setup_logger


class RerankRule(str, Enum):
    ZERO_EDIT_DISTANCE = "zero-edit-distance"
    CLASSIFIER_ACCEPT = "classifier-accept"
    FALLBACK_TOP1 = "fallback-top1"


class RerankDecision(BaseModel):
    """Which candidate was chosen, by which rule, and each candidate's score."""

    model_config = ConfigDict(frozen=True)

    chosen: int
    rule: RerankRule
    diagnostics: Tuple[float, ...] = ()

    def as_line(self) -> str:
        scores = " ".join(f"{d:g}" for d in self.diagnostics)
        return f"chosen={self.chosen} rule={self.rule.value} diagnostics=[{scores}]"


# ============================================================================
# BASE RERANKER CLASS
# ============================================================================

class BaseReranker(ABC):
    """
    Abstract base for all re-rankers.

    Subclasses implement:
    - name: identifier used for logging and the CLI mode
    - accept_rule: the RerankRule reported when a candidate is accepted
    - score(candidate): diagnostic value for one candidate text
    - accepts(score): whether that value selects the candidate
    """

    def __init__(self):
        self.logger = setup_logger(f"Rerank.{self.name}")

    @property
    @abstractmethod
    def name(self) -> str:
        pass

    @property
    @abstractmethod
    def accept_rule(self) -> RerankRule:
        pass

    @abstractmethod
    def score(self, candidate: str) -> float:
        pass

    @abstractmethod
    def accepts(self, score: float) -> bool:
        pass

    def rerank(self, candidates: Sequence[str]) -> RerankDecision:
        """
        Scan candidates in rank order; the first accepted one wins.

        Every candidate is scored so the diagnostics are complete.

        Raises:
            EmptyNBest: no candidates
        """
        if not candidates:
            raise EmptyNBest()

        diagnostics = tuple(float(self.score(c)) for c in candidates)
        for index, value in enumerate(diagnostics):
            if self.accepts(value):
                decision = RerankDecision(chosen=index, rule=self.accept_rule, diagnostics=diagnostics)
                break
        else:
            decision = RerankDecision(chosen=0, rule=RerankRule.FALLBACK_TOP1, diagnostics=diagnostics)

        self.logger.debug(decision.as_line())
        return decision


# LEARNING QUESTIONS:
# Q1: Why does rerank() score all candidates instead of stopping early?
# A1: The decision log reports a diagnostic for every candidate. Stopping at
#     the first accepted one would leave the rest of the list unexplained.

# Q2: Why is RerankRule a str Enum?
# A2: Members compare equal to their string values and print cleanly in the
#     decision log, while typos in rule names still fail at attribute lookup.
