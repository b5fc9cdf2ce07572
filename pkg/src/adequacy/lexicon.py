"""
Match lexicon: which surface phrases realize a slot value.

LEARNING POINTS:
- The lexicon is data (lexicon.tsv), not code, so phrases can be added
  without touching the matcher
- Every value's phrase set contains the literal value string
- Values missing from the file fall back to their literal string unless
  literal_fallback is off, in which case lookup raises LexiconMissingValue
"""

from pathlib import Path
from typing import Dict, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict

from src.core.errors import LexiconFormatError, LexiconMissingValue
from src.core.mr import SLOT_ORDER

DEFAULT_LEXICON_PATH = Path(__file__).with_name("lexicon.tsv")

LEXICON_SLOTS: Tuple[str, ...] = tuple(slot for slot in SLOT_ORDER if slot != "name")


class MatchLexicon(BaseModel):
    """slot -> value -> phrases (literal value first)."""

    model_config = ConfigDict(frozen=True)

    entries: Dict[str, Dict[str, Tuple[str, ...]]] = {}
    literal_fallback: bool = True

    @classmethod
    def literal(cls) -> "MatchLexicon":
        """Exact matching only: every value is realized by its own string."""
        return cls(entries={}, literal_fallback=True)

    def phrases(self, slot: str, value: str) -> Tuple[str, ...]:
        known = self.entries.get(slot, {}).get(value)
        if known:
            return known
        if not self.literal_fallback:
            raise LexiconMissingValue(slot, value)
        return (value,)

    def matches(self, slot: str, value: str, utterance: str) -> bool:
        """Case-insensitive substring match of any phrase in the utterance."""
        haystack = utterance.casefold()
        return any(phrase.casefold() in haystack for phrase in self.phrases(slot, value))


def parse_lexicon(text: str, literal_fallback: bool = True) -> MatchLexicon:
    entries: Dict[str, Dict[str, list]] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise LexiconFormatError(line_no, f"expected 3 tab-separated fields, found {len(fields)}")
        slot, value, phrase = (f.strip() for f in fields)
        if slot not in LEXICON_SLOTS:
            raise LexiconFormatError(line_no, f"unknown or unmatched slot {slot!r}")
        if not value or not phrase:
            raise LexiconFormatError(line_no, "empty value or phrase")

        phrases = entries.setdefault(slot, {}).setdefault(value, [value])
        if phrase not in phrases:
            phrases.append(phrase)

    return MatchLexicon(
        entries={slot: {v: tuple(p) for v, p in values.items()} for slot, values in entries.items()},
        literal_fallback=literal_fallback,
    )


def load_lexicon(path: Optional[Union[str, Path]] = None, literal_fallback: bool = True) -> MatchLexicon:
    """Load a lexicon TSV; the shipped file is used when path is None."""
    source = Path(path) if path else DEFAULT_LEXICON_PATH
    return parse_lexicon(source.read_text(encoding="utf-8"), literal_fallback)
