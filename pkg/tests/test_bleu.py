import math

import pytest

from src.core.errors import EmptyReferences, LengthMismatch
from src.evaluation.bleu import bleu, tokenize

TOY_HYPOTHESES = ["the cat sat on the mat", "a quick brown fox jumps"]
TOY_REFERENCES = [
    ["the cat is on the mat"],
    ["a quick brown fox leaps", "the quick brown fox jumps over"],
]


class TestBleu:
    def test_identical_corpus(self, sample_rows):
        references = [rf for _, rf in sample_rows]
        report = bleu(references, [[r] for r in references])
        assert report.bleu == pytest.approx(1.0, abs=1e-12)
        assert report.brevity_penalty == 1.0

    def test_disjoint_corpus(self):
        assert bleu(["alpha beta gamma delta"], [["one two three four"]]).bleu == 0.0

    def test_hand_computed_toy_corpus(self):
        # clipped precisions 10/11, 7/9, 4/7, 2/5; lengths 11 vs 11
        report = bleu(TOY_HYPOTHESES, TOY_REFERENCES)
        assert report.matches == [10, 7, 4, 2]
        assert report.totals == [11, 9, 7, 5]
        assert report.hypothesis_length == report.reference_length == 11
        assert report.bleu == pytest.approx((16 / 99) ** 0.25, abs=1e-9)

    def test_brevity_penalty(self):
        report = bleu(["the cat sat"], [["the cat sat on the mat"]])
        assert report.brevity_penalty == pytest.approx(math.exp(-1.0))
        assert report.bleu == 0.0

    def test_closest_reference_length(self):
        report = bleu(["a b c d e"], [["a b c d", "a b c d e f g h"]])
        assert report.reference_length == 4

    def test_clipping(self):
        report = bleu(["the the the the"], [["the cat"]])
        assert report.matches[0] == 1
        assert report.totals[0] == 4

    def test_smoothing(self):
        report = bleu(TOY_HYPOTHESES[:1], TOY_REFERENCES[:1], smoothing=True)
        assert report.precisions == pytest.approx([5 / 6, 4 / 6, 2 / 5, 1 / 4])
        assert report.bleu == pytest.approx((1 / 18) ** 0.25, abs=1e-9)
        assert bleu(TOY_HYPOTHESES[:1], TOY_REFERENCES[:1]).bleu == 0.0

    def test_adding_an_exact_pair_never_lowers_matches(self):
        base = bleu(TOY_HYPOTHESES, TOY_REFERENCES)
        extended = bleu(TOY_HYPOTHESES + ["it is a pub"], TOY_REFERENCES + [["it is a pub"]])
        assert all(e >= b for e, b in zip(extended.matches, base.matches))
        assert 0.0 <= extended.bleu <= 1.0

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            bleu(["a"], [])

    def test_empty_reference_set(self):
        with pytest.raises(EmptyReferences) as info:
            bleu(["a", "b"], [["a"], []])
        assert info.value.index == 1

    def test_report_lines(self):
        lines = bleu(TOY_HYPOTHESES, TOY_REFERENCES).as_lines()
        assert lines[0].startswith("bleu=0.")
        assert "smoothing=false" in lines


def test_tokenize_splits_punctuation_and_lowercases():
    assert tokenize("It's near Café Rouge.") == ["it", "'", "s", "near", "café", "rouge", "."]
