"""
Meaning Representations - parse, canonicalize, diff and catalog slot values

LEARNING POINTS:
- Frozen pydantic models give immutable, hashable domain values
- A field_validator enforces invariants once, at construction time
- Canonical slot order is a frozen constant, not learned from data
- Values are kept byte-exact: no case folding, no normalization

Format (one MR):
    name[Blue Spice], eatType[coffee shop], area[city centre]
"""

import re
from typing import Any, Dict, FrozenSet, Iterable, Mapping, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from src.core.errors import (
    CatalogMissingSlot,
    DuplicateSlot,
    EmptyCorpus,
    EmptyInput,
    MalformedItem,
    UnknownSlot,
)


# ============================================================================
# SLOT UNIVERSE
# ============================================================================

SLOT_ORDER: Tuple[str, ...] = (
    "name",
    "eatType",
    "food",
    "priceRange",
    "customer rating",
    "area",
    "familyFriendly",
    "near",
)
"""The 8 slot keys, exactly as spelled in the data, in canonical order."""

SLOT_RANK: Dict[str, int] = {slot: rank for rank, slot in enumerate(SLOT_ORDER)}

# Items end at "]" followed by a comma; whitespace on either side is optional.
_ITEM_SPLIT = re.compile(r"\]\s*,\s*")


class MeaningRepresentation(BaseModel):
    """
    Ordered slot -> value mapping over the 8-slot universe.

    Construction always canonicalizes: pairs are re-ordered by SLOT_ORDER,
    values are trimmed, and unknown/duplicate/empty slots are rejected.

    Usage:
        mr = MeaningRepresentation.from_slots({"name": "X", "area": "riverside"})
        mr["area"]          # "riverside"
        "food" in mr        # False
    """

    model_config = ConfigDict(frozen=True)

    pairs: Tuple[Tuple[str, str], ...]

    @field_validator("pairs", mode="before")
    @classmethod
    def _canonicalize(cls, pairs: Any) -> Tuple[Tuple[str, str], ...]:
        seen = set()
        cleaned = []
        for slot, value in pairs:
            if slot not in SLOT_RANK:
                raise UnknownSlot(slot)
            if slot in seen:
                raise DuplicateSlot(slot)
            seen.add(slot)
            value = str(value).strip()
            if not value:
                raise MalformedItem(f"{slot}[]", "empty value")
            if "[" in value or "]" in value:
                raise MalformedItem(f"{slot}[{value}]", "brackets inside value")
            cleaned.append((slot, value))
        return tuple(sorted(cleaned, key=lambda pair: SLOT_RANK[pair[0]]))

    @classmethod
    def from_slots(
        cls, slots: Union[Mapping[str, str], Iterable[Tuple[str, str]]]
    ) -> "MeaningRepresentation":
        """Build an MR from a mapping or an iterable of (slot, value)."""
        items = slots.items() if isinstance(slots, Mapping) else slots
        return cls(pairs=tuple(items))

    @property
    def slots(self) -> Dict[str, str]:
        return dict(self.pairs)

    @property
    def slot_types(self) -> Tuple[str, ...]:
        return tuple(slot for slot, _ in self.pairs)

    @property
    def arity(self) -> int:
        return len(self.pairs)

    def get(self, slot: str, default: Optional[str] = None) -> Optional[str]:
        return self.slots.get(slot, default)

    def with_slot(self, slot: str, value: str) -> "MeaningRepresentation":
        """Return a copy with one more slot (raises DuplicateSlot if present)."""
        return MeaningRepresentation(pairs=self.pairs + ((slot, value),))

    def without_slot(self, slot: str) -> "MeaningRepresentation":
        return MeaningRepresentation(pairs=tuple(p for p in self.pairs if p[0] != slot))

    def __contains__(self, slot: object) -> bool:
        return any(slot == key for key, _ in self.pairs)

    def __getitem__(self, slot: str) -> str:
        for key, value in self.pairs:
            if key == slot:
                return value
        raise KeyError(slot)

    def __len__(self) -> int:
        return len(self.pairs)

    def __str__(self) -> str:
        return serialize_mr(self)


# ============================================================================
# PARSING / SERIALIZATION
# ============================================================================

def parse_mr(text: str) -> MeaningRepresentation:
    """
    Parse `key[value], key[value], ...` into a canonical MR.

    Items are split on `]` + comma boundaries, so values may contain commas.

    Raises:
        EmptyInput: blank text
        MalformedItem: missing or stray brackets, empty key
        UnknownSlot: key outside the 8-slot universe
        DuplicateSlot: key used twice
    """
    body = text.strip()
    if not body:
        raise EmptyInput()
    if not body.endswith("]"):
        raise MalformedItem(body, "missing closing bracket")

    pairs = []
    for raw in _ITEM_SPLIT.split(body[:-1]):
        item = raw.strip()
        if item.count("[") != 1 or "]" in item:
            raise MalformedItem(item)
        key, value = item.split("[", 1)
        key = key.strip()
        if not key:
            raise MalformedItem(item, "empty slot key")
        pairs.append((key, value))

    return MeaningRepresentation(pairs=tuple(pairs))


def serialize_mr(mr: MeaningRepresentation) -> str:
    """Emit the canonical string: `key[value]` items joined by ", "."""
    return ", ".join(f"{slot}[{value}]" for slot, value in mr.pairs)


# ============================================================================
# SLOT DIFF
# ============================================================================

class SlotDiff(BaseModel):
    """Slot-level difference between two MRs (a -> b)."""

    model_config = ConfigDict(frozen=True)

    added: FrozenSet[Tuple[str, str]] = frozenset()
    removed: FrozenSet[Tuple[str, str]] = frozenset()
    changed: FrozenSet[Tuple[str, str, str]] = frozenset()

    @property
    def is_empty(self) -> bool:
        return not (self.added or self.removed or self.changed)


def diff_slots(a: MeaningRepresentation, b: MeaningRepresentation) -> SlotDiff:
    a_slots, b_slots = a.slots, b.slots
    return SlotDiff(
        added=frozenset((s, v) for s, v in b_slots.items() if s not in a_slots),
        removed=frozenset((s, v) for s, v in a_slots.items() if s not in b_slots),
        changed=frozenset(
            (s, v, b_slots[s]) for s, v in a_slots.items()
            if s in b_slots and b_slots[s] != v
        ),
    )


# ============================================================================
# SLOT CATALOG
# ============================================================================

class SlotCatalog(BaseModel):
    """
    Empirical value distribution per slot type.

    counts keep first-occurrence order, which fixes the inverse-CDF
    ordering used by sample().
    """

    model_config = ConfigDict(frozen=True)

    counts: Dict[str, Dict[str, int]]

    def covers(self, slot: str) -> bool:
        return bool(self.counts.get(slot))

    def values(self, slot: str) -> Tuple[str, ...]:
        return tuple(self.counts.get(slot, {}))

    def probabilities(self, slot: str) -> Dict[str, float]:
        if not self.covers(slot):
            raise CatalogMissingSlot(slot)
        slot_counts = self.counts[slot]
        total = sum(slot_counts.values())
        return {value: count / total for value, count in slot_counts.items()}

    def sample(self, slot: str, rng: np.random.Generator) -> str:
        """Draw one value by inverse CDF over the empirical distribution."""
        probs = self.probabilities(slot)
        values = list(probs)
        cdf = np.cumsum(list(probs.values()))
        index = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
        return values[min(index, len(values) - 1)]


def build_slot_catalog(pairs: Iterable[Any]) -> SlotCatalog:
    """
    Count every (slot, value) occurrence over a corpus.

    Args:
        pairs: (MR, RF) tuples or objects with an `.mr` attribute

    Raises:
        EmptyCorpus: no pairs given
    """
    counts: Dict[str, Dict[str, int]] = {}
    seen_any = False
    for item in pairs:
        seen_any = True
        mr = item.mr if hasattr(item, "mr") else item[0]
        for slot, value in mr.pairs:
            slot_counts = counts.setdefault(slot, {})
            slot_counts[value] = slot_counts.get(value, 0) + 1
    if not seen_any:
        raise EmptyCorpus()
    return SlotCatalog(counts=counts)


# LEARNING QUESTIONS:
# Q1: What does parse_mr do with "name[X],area[Y]" (no space after the comma)?
# A1: The split pattern allows any whitespace, including none, around the
#     comma, so it parses the same as "name[X], area[Y]".

# Q2: Why does MeaningRepresentation not override __iter__?
# A2: BaseModel.__iter__ yields (field, value) pairs and pydantic relies on it
#     (dict(model), copying). Use .pairs or .slots to walk the slots.

# Q3: What happens when a validator raises UnknownSlot?
# A3: UnknownSlot is not a ValueError, so pydantic re-raises it untouched and
#     callers can catch the precise error class.
