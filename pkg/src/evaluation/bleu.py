"""
Multi-reference corpus BLEU.

LEARNING POINTS:
- Tokenization: lowercase, then nltk's wordpunct_tokenize (punctuation runs
  become their own tokens, whitespace separates the rest)
- Clipped counts: a hypothesis n-gram counts at most as often as it appears
  in the single reference where it is most frequent
- Counts are summed over the corpus before dividing (corpus BLEU, not an
  average of sentence scores)
- Brevity penalty uses, per sentence, the reference length closest to the
  hypothesis length (ties go to the shorter reference)
- No smoothing: any zero precision makes BLEU 0. With smoothing on, add-1 is
  applied to numerator and denominator for n >= 2
"""

import math
from collections import Counter
from typing import List, Sequence

from nltk.tokenize import wordpunct_tokenize
from nltk.translate.bleu_score import brevity_penalty, closest_ref_length
from nltk.util import ngrams
from pydantic import BaseModel

from src.core.errors import EmptyReferences, LengthMismatch


class BleuReport(BaseModel):
    bleu: float
    precisions: List[float]
    matches: List[int]
    totals: List[int]
    brevity_penalty: float
    hypothesis_length: int
    reference_length: int
    smoothing: bool = False

    def as_lines(self) -> List[str]:
        lines = [f"bleu={self.bleu:.6f}"]
        lines += [f"p{n}={p:.6f}" for n, p in enumerate(self.precisions, start=1)]
        lines += [
            f"brevity_penalty={self.brevity_penalty:.6f}",
            f"hypothesis_length={self.hypothesis_length}",
            f"reference_length={self.reference_length}",
            f"smoothing={str(self.smoothing).lower()}",
        ]
        return lines


def tokenize(text: str) -> List[str]:
    return wordpunct_tokenize(text.lower())


def _clipped_counts(hypothesis: List[str], references: List[List[str]], n: int):
    counts = Counter(ngrams(hypothesis, n))
    max_ref: Counter = Counter()
    for reference in references:
        for gram, count in Counter(ngrams(reference, n)).items():
            max_ref[gram] = max(max_ref[gram], count)
    matched = sum(min(count, max_ref[gram]) for gram, count in counts.items())
    return matched, max(len(hypothesis) - n + 1, 0)


def bleu(
    hypotheses: Sequence[str],
    references: Sequence[Sequence[str]],
    max_n: int = 4,
    smoothing: bool = False,
) -> BleuReport:
    """
    Raises:
        LengthMismatch: hypotheses and reference sets differ in number
        EmptyReferences: a reference set is empty
    """
    if len(hypotheses) != len(references):
        raise LengthMismatch(len(hypotheses), len(references))
    for index, refs in enumerate(references):
        if not refs:
            raise EmptyReferences(index)

    matches = [0] * max_n
    totals = [0] * max_n
    hyp_len = 0
    ref_len = 0

    for hypothesis, refs in zip(hypotheses, references):
        hyp_tokens = tokenize(hypothesis)
        ref_tokens = [tokenize(r) for r in refs]
        hyp_len += len(hyp_tokens)
        ref_len += closest_ref_length(ref_tokens, len(hyp_tokens))
        for n in range(1, max_n + 1):
            matched, total = _clipped_counts(hyp_tokens, ref_tokens, n)
            matches[n - 1] += matched
            totals[n - 1] += total

    precisions = []
    for n in range(1, max_n + 1):
        numerator, denominator = matches[n - 1], totals[n - 1]
        if smoothing and n >= 2:
            numerator, denominator = numerator + 1, denominator + 1
        precisions.append(numerator / denominator if denominator else 0.0)

    bp = float(brevity_penalty(ref_len, hyp_len))
    if all(p > 0 for p in precisions):
        score = bp * math.exp(math.fsum(math.log(p) for p in precisions) / max_n)
    else:
        score = 0.0

    return BleuReport(
        bleu=score,
        precisions=precisions,
        matches=matches,
        totals=totals,
        brevity_penalty=bp,
        hypothesis_length=hyp_len,
        reference_length=ref_len,
        smoothing=smoothing,
    )
