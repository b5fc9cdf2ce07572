"""Normalize the different n-best shapes into candidate texts."""

from typing import List, Optional, Sequence, Union

from src.core.vocab import Vocabulary
from src.model.decoding import NBestList

Candidates = Union[NBestList, Sequence]


def candidate_texts(nbest: Candidates, vocab: Optional[Vocabulary] = None) -> List[str]:
    """Texts of an NBestList (needs vocab), a list of n-best entries, or a list of strings."""
    if isinstance(nbest, NBestList):
        if vocab is None:
            raise ValueError("a vocabulary is needed to decode an NBestList")
        return nbest.texts(vocab)
    return [c if isinstance(c, str) else c.text for c in nbest]
