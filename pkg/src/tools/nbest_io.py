"""
Line-oriented n-best interchange: `rank ||| raw ||| normalized ||| text`.

Scores are written with repr() so they read back as the same float.
"""

from typing import List, Sequence

from pydantic import BaseModel, ConfigDict

from src.core.errors import RowParseError
from src.core.vocab import Vocabulary
from src.model.decoding import NBestList

SEPARATOR = " ||| "


class NBestEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    rank: int
    raw_score: float
    normalized_score: float
    text: str


def entries_from_nbest(nbest: NBestList, vocab: Vocabulary) -> List[NBestEntry]:
    return [
        NBestEntry(
            rank=rank,
            raw_score=hyp.raw_score,
            normalized_score=hyp.normalized_score,
            text=vocab.decode(hyp.tokens),
        )
        for rank, hyp in enumerate(nbest)
    ]


def format_nbest(entries: Sequence[NBestEntry]) -> str:
    return "".join(
        f"{e.rank}{SEPARATOR}{e.raw_score!r}{SEPARATOR}{e.normalized_score!r}{SEPARATOR}{e.text}\n"
        for e in entries
    )


def parse_nbest(text: str) -> List[NBestEntry]:
    """Parse records back; entries are returned sorted by rank."""
    entries = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split(SEPARATOR, 3)
        if len(parts) != 4:
            raise RowParseError(line_no, "n-best record needs 4 fields separated by ' ||| '")
        try:
            entries.append(NBestEntry(
                rank=int(parts[0]),
                raw_score=float(parts[1]),
                normalized_score=float(parts[2]),
                text=parts[3],
            ))
        except ValueError as e:
            raise RowParseError(line_no, f"bad n-best number: {e}") from e
    return sorted(entries, key=lambda e: e.rank)
