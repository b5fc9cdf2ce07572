import json

from src.core.mr import MeaningRepresentation
from src.evaluation.coverage import (
    coverage_report,
    known_words,
    nonword_report,
    oracle_report,
    render_summary,
)


class TestCoverage:
    def test_sample_rows_have_no_omissions(self, sample_pairs, lexicon):
        report = coverage_report(sample_pairs, lexicon)
        assert report.omission_rate == 0.0
        assert report.flagged_pairs == 0
        assert report.checked_slots == sum(mr.arity - 1 for mr, _ in sample_pairs)

    def test_empty_utterances_omit_everything(self, sample_pairs, lexicon):
        report = coverage_report([(mr, "") for mr, _ in sample_pairs], lexicon)
        assert report.omission_rate == 1.0
        assert report.slot_omission_rate == 1.0

    def test_by_arity(self, sample_pairs, lexicon):
        pairs = [(mr, rf) for mr, rf in sample_pairs]
        pairs[0] = (pairs[0][0], "Blue Spice is a coffee shop.")
        report = coverage_report(pairs, lexicon)
        assert report.items[0].missing == ("area",)
        assert report.by_arity[3].flagged == 1
        assert report.by_arity[3].pairs == 1
        assert report.by_arity[8].rate == 0.0
        assert "arity_3=1/1 (1.000000)" in report.as_lines()

    def test_empty_input(self, lexicon):
        report = coverage_report([], lexicon)
        assert report.omission_rate == 0.0
        assert report.summary()["pairs"] == 0


class TestOracle:
    def test_counts(self, lexicon):
        mr = MeaningRepresentation.from_slots({"name": "X", "area": "riverside"})
        other = MeaningRepresentation.from_slots({"name": "Y", "eatType": "pub"})
        report = oracle_report([
            (mr, ["X is nice.", "X is by the river."]),
            (other, ["Y is a pub."]),
            (other, ["Y.", "Y again."]),
        ], lexicon)
        assert report.mrs == 3
        assert report.with_oracle == 2
        assert report.top1_adequate == 1
        assert report.oracle_rate == 2 / 3
        assert "arity_2_oracle=2/3" in report.as_lines()


class TestNonwords:
    def test_unknown_words(self):
        vocabulary = known_words(["Blue Spice is a pub.", "It is cheap."])
        report = nonword_report(["Blue Spice is a pubb near the rivr.", "It is 5 out of 5."], vocabulary)
        assert report.tokens == 12
        assert report.examples == ["pubb", "near", "the", "rivr", "out", "of"]
        assert report.unknown == 6
        assert report.rate == 0.5

    def test_max_examples(self):
        report = nonword_report(["a b c d"], set(), max_examples=2)
        assert report.examples == ["a", "b"]


def test_summary_is_sorted_json():
    text = render_summary(zeta={"b": 1, "a": 2}, alpha=[1.5])
    assert list(json.loads(text)) == ["alpha", "zeta"]
    assert text.endswith("\n")
