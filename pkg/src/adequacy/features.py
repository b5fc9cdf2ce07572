"""Seven binary string-matching features, one per non-name slot."""

from typing import Tuple

import numpy as np

from src.adequacy.lexicon import LEXICON_SLOTS, MatchLexicon
from src.core.mr import MeaningRepresentation

FEATURE_SLOTS: Tuple[str, ...] = LEXICON_SLOTS
NUM_FEATURES = len(FEATURE_SLOTS)


def extract_features(mr: MeaningRepresentation, utterance: str, lex: MatchLexicon) -> np.ndarray:
    """
    1.0 when the slot is absent (nothing to omit) or one of its phrases
    occurs in the utterance, else 0.0.
    """
    features = np.ones(NUM_FEATURES, dtype=np.float64)
    for i, slot in enumerate(FEATURE_SLOTS):
        value = mr.get(slot)
        if value is not None and not lex.matches(slot, value, utterance):
            features[i] = 0.0
    return features


def missing_slots(mr: MeaningRepresentation, utterance: str, lex: MatchLexicon) -> Tuple[str, ...]:
    """Present slots whose feature is 0 (suspected omissions)."""
    features = extract_features(mr, utterance, lex)
    return tuple(
        slot for slot, f in zip(FEATURE_SLOTS, features) if f == 0.0 and slot in mr
    )
