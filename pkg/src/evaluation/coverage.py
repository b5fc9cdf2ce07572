"""
Slot-coverage diagnostics for generated utterances.

A present slot whose matching feature is 0 is a suspected omission.
Reports break results down by MR arity (number of slots), since larger MRs
are where omissions concentrate.
"""

import json
from typing import Dict, Iterable, List, Sequence, Tuple

from pydantic import BaseModel, Field

from src.adequacy.features import missing_slots
from src.adequacy.lexicon import MatchLexicon
from src.core.mr import MeaningRepresentation
from src.evaluation.bleu import tokenize


class CoverageItem(BaseModel):
    index: int
    arity: int
    missing: Tuple[str, ...] = ()


class ArityStats(BaseModel):
    pairs: int = 0
    flagged: int = 0

    @property
    def rate(self) -> float:
        return self.flagged / self.pairs if self.pairs else 0.0


class CoverageReport(BaseModel):
    items: List[CoverageItem] = Field(default_factory=list)
    checked_slots: int = 0
    missing_slots: int = 0
    by_arity: Dict[int, ArityStats] = Field(default_factory=dict)

    @property
    def pairs(self) -> int:
        return len(self.items)

    @property
    def flagged_pairs(self) -> int:
        return sum(1 for item in self.items if item.missing)

    @property
    def omission_rate(self) -> float:
        """Fraction of utterances with at least one suspected omission."""
        return self.flagged_pairs / self.pairs if self.pairs else 0.0

    @property
    def slot_omission_rate(self) -> float:
        return self.missing_slots / self.checked_slots if self.checked_slots else 0.0

    def as_lines(self) -> List[str]:
        lines = [
            f"pairs={self.pairs}",
            f"flagged_pairs={self.flagged_pairs}",
            f"omission_rate={self.omission_rate:.6f}",
            f"slot_omission_rate={self.slot_omission_rate:.6f}",
        ]
        for arity in sorted(self.by_arity):
            stats = self.by_arity[arity]
            lines.append(f"arity_{arity}={stats.flagged}/{stats.pairs} ({stats.rate:.6f})")
        return lines

    def summary(self) -> Dict:
        return {
            "pairs": self.pairs,
            "flagged_pairs": self.flagged_pairs,
            "omission_rate": self.omission_rate,
            "slot_omission_rate": self.slot_omission_rate,
            "by_arity": {str(a): {"pairs": s.pairs, "flagged": s.flagged, "rate": s.rate}
                         for a, s in sorted(self.by_arity.items())},
        }


def coverage_report(
    pairs: Iterable[Tuple[MeaningRepresentation, str]], lex: MatchLexicon
) -> CoverageReport:
    report = CoverageReport()
    for index, (mr, utterance) in enumerate(pairs):
        missing = missing_slots(mr, utterance, lex)
        report.items.append(CoverageItem(index=index, arity=mr.arity, missing=missing))
        report.checked_slots += sum(1 for slot, _ in mr.pairs if slot != "name")
        report.missing_slots += len(missing)
        stats = report.by_arity.setdefault(mr.arity, ArityStats())
        stats.pairs += 1
        stats.flagged += int(bool(missing))
    return report


# ============================================================================
# ORACLE REPORT
# ============================================================================

class OracleReport(BaseModel):
    mrs: int = 0
    with_oracle: int = 0
    top1_adequate: int = 0
    by_arity: Dict[int, ArityStats] = Field(default_factory=dict)

    @property
    def oracle_rate(self) -> float:
        return self.with_oracle / self.mrs if self.mrs else 0.0

    def as_lines(self) -> List[str]:
        lines = [
            f"mrs={self.mrs}",
            f"with_oracle={self.with_oracle}",
            f"oracle_rate={self.oracle_rate:.6f}",
            f"top1_adequate={self.top1_adequate}",
        ]
        for arity in sorted(self.by_arity):
            stats = self.by_arity[arity]
            lines.append(f"arity_{arity}_oracle={stats.flagged}/{stats.pairs}")
        return lines


def oracle_report(
    nbest_by_mr: Iterable[Tuple[MeaningRepresentation, Sequence[str]]], lex: MatchLexicon
) -> OracleReport:
    """
    Count MRs whose n-best list holds a candidate with no suspected omission.

    In by_arity, `flagged` counts MRs that do have such an oracle candidate.
    """
    report = OracleReport()
    for mr, candidates in nbest_by_mr:
        adequate = [not missing_slots(mr, c, lex) for c in candidates]
        has_oracle = any(adequate)
        report.mrs += 1
        report.with_oracle += int(has_oracle)
        report.top1_adequate += int(bool(adequate) and adequate[0])
        stats = report.by_arity.setdefault(mr.arity, ArityStats())
        stats.pairs += 1
        stats.flagged += int(has_oracle)
    return report


# ============================================================================
# NON-WORD REPORT
# ============================================================================

class NonwordReport(BaseModel):
    tokens: int = 0
    unknown: int = 0
    examples: List[str] = Field(default_factory=list)

    @property
    def rate(self) -> float:
        return self.unknown / self.tokens if self.tokens else 0.0

    def as_lines(self) -> List[str]:
        return [
            f"word_tokens={self.tokens}",
            f"nonword_tokens={self.unknown}",
            f"nonword_rate={self.rate:.6f}",
            f"nonword_examples={' '.join(self.examples)}",
        ]


def known_words(texts: Iterable[str]) -> set:
    return {token for text in texts for token in tokenize(text) if token.isalpha()}


def nonword_report(utterances: Iterable[str], vocabulary: set, max_examples: int = 20) -> NonwordReport:
    """Alphabetic tokens of the utterances that never occur in the training text."""
    report = NonwordReport()
    seen_unknown: Dict[str, None] = {}
    for utterance in utterances:
        for token in tokenize(utterance):
            if not token.isalpha():
                continue
            report.tokens += 1
            if token not in vocabulary:
                report.unknown += 1
                seen_unknown.setdefault(token, None)
    report.examples = list(seen_unknown)[:max_examples]
    return report


def render_summary(**sections) -> str:
    """Machine-readable JSON summary, keys sorted for stable output."""
    return json.dumps(sections, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
