"""The vanilla system: always keep the forward model's top hypothesis."""

from src.core.base_reranker import BaseReranker, RerankRule


class ForwardReranker(BaseReranker):
    """Accepts rank 0 unconditionally; the rule reported is fallback-top1."""

    @property
    def name(self) -> str:
        return "forward"

    @property
    def accept_rule(self) -> RerankRule:
        return RerankRule.FALLBACK_TOP1

    def score(self, candidate: str) -> float:
        return 0.0

    def accepts(self, score: float) -> bool:
        return True
