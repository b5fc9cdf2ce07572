"""Character edit distance over Unicode code points (unit costs)."""

import Levenshtein


def levenshtein(a: str, b: str) -> int:
    return Levenshtein.distance(a, b)
