"""
Character vocabulary.

Ids 0..3 are reserved (PAD, BOS, EOS, UNK); every other character gets the
next id in first-occurrence order over the corpus, so the same corpus always
yields the same mapping.
"""

from typing import Dict, Iterable, List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, PrivateAttr, field_validator

PAD_ID = 0
BOS_ID = 1
EOS_ID = 2
UNK_ID = 3
RESERVED_TOKENS: Tuple[str, ...] = ("<pad>", "<s>", "</s>", "<unk>")
UNK_CHAR = "�"


class Vocabulary(BaseModel):
    """char <-> id mapping; `chars` lists the non-reserved characters by id."""

    model_config = ConfigDict(frozen=True)

    chars: Tuple[str, ...] = ()

    _index: Dict[str, int] = PrivateAttr(default_factory=dict)

    @field_validator("chars")
    @classmethod
    def _single_unique_chars(cls, chars: Tuple[str, ...]) -> Tuple[str, ...]:
        if any(len(ch) != 1 for ch in chars):
            raise ValueError("vocabulary entries must be single characters")
        if len(set(chars)) != len(chars):
            raise ValueError("vocabulary entries must be unique")
        return chars

    def model_post_init(self, __context) -> None:
        self._index = {ch: i + len(RESERVED_TOKENS) for i, ch in enumerate(self.chars)}

    def __len__(self) -> int:
        return len(RESERVED_TOKENS) + len(self.chars)

    def encode(self, text: str) -> List[int]:
        """Characters unseen at build time map to UNK."""
        return [self._index.get(ch, UNK_ID) for ch in text]

    def encode_source(self, text: str) -> List[int]:
        return self.encode(text) + [EOS_ID]

    def encode_target(self, text: str) -> List[int]:
        return self.encode(text) + [EOS_ID]

    def decode(self, ids: Sequence[int]) -> str:
        """Inverse of encode; stops at EOS, drops PAD/BOS, renders UNK as U+FFFD."""
        out = []
        offset = len(RESERVED_TOKENS)
        for token in ids:
            if token == EOS_ID:
                break
            if token in (PAD_ID, BOS_ID):
                continue
            if token == UNK_ID or not offset <= token < len(self):
                out.append(UNK_CHAR)
            else:
                out.append(self.chars[token - offset])
        return "".join(out)


def build_vocab(texts: Iterable[str]) -> Vocabulary:
    chars: Dict[str, None] = {}
    for text in texts:
        for ch in text:
            chars.setdefault(ch, None)
    return Vocabulary(chars=tuple(chars))
