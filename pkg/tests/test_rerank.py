from functools import lru_cache
import itertools

import numpy as np
import pytest

from src.adequacy.classifier import ClassifierWeights, LogregHyper, train_logreg
from src.adequacy.features import NUM_FEATURES, missing_slots
from src.augment.synthesis import AugmentConfig, balance, make_omission_dataset
from src.core.base_reranker import RerankDecision, RerankRule
from src.core.errors import EmptyNBest
from src.core.mr import MeaningRepresentation, build_slot_catalog, serialize_mr
from src.core.vocab import build_vocab
from src.model.decoding import beam_search
from src.model.params import ModelParams
from src.rerank.candidates import candidate_texts
from src.rerank.classifier import ClassifierReranker, classifier_rerank
from src.rerank.forward import ForwardReranker
from src.rerank.levenshtein import levenshtein
from src.rerank.reverse import ReverseReranker, make_reconstructor, reverse_rerank
from src.tools.nbest_io import NBestEntry


def reference_distance(a: str, b: str) -> int:
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (ca != cb)))
        previous = current
    return previous[-1]


@lru_cache(maxsize=None)
def recursive_distance(a: str, b: str) -> int:
    if not a or not b:
        return len(a) + len(b)
    return min(
        recursive_distance(a[1:], b) + 1,
        recursive_distance(a, b[1:]) + 1,
        recursive_distance(a[1:], b[1:]) + (a[0] != b[0]),
    )


class TestLevenshtein:
    @pytest.mark.parametrize("a,b,expected", [
        ("", "", 0),
        ("abc", "", 3),
        ("kitten", "sitting", 3),
        ("name[X]", "name[Y]", 1),
        ("Café", "Cafe", 1),
    ])
    def test_known_distances(self, a, b, expected):
        assert levenshtein(a, b) == expected

    def test_matches_dynamic_programming(self):
        rng = np.random.default_rng(0)
        alphabet = list("ab[]é ")
        for _ in range(200):
            a = "".join(rng.choice(alphabet, size=int(rng.integers(0, 9))))
            b = "".join(rng.choice(alphabet, size=int(rng.integers(0, 9))))
            assert levenshtein(a, b) == reference_distance(a, b)

    def test_exhaustive_short_strings(self):
        words = ["".join(p) for n in range(4) for p in itertools.product("abc", repeat=n)]
        for a, b in itertools.product(words, repeat=2):
            assert levenshtein(a, b) == recursive_distance(a, b)

    @pytest.mark.slow
    def test_matches_recursive_definition(self):
        rng = np.random.default_rng(2024)
        alphabet = list("abc")
        for _ in range(100_000):
            a = "".join(rng.choice(alphabet, size=int(rng.integers(0, 7))))
            b = "".join(rng.choice(alphabet, size=int(rng.integers(0, 7))))
            assert levenshtein(a, b) == recursive_distance(a, b)

    def test_metric_properties(self):
        words = ["pub", "pubs", "club", "", "coffee shop", "shop"]
        for a, b, c in itertools.product(words, repeat=3):
            assert levenshtein(a, b) == levenshtein(b, a)
            assert (levenshtein(a, b) == 0) == (a == b)
            assert levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c)


class TestReverseReranker:
    MR_TEXT = "name[X]"
    RECONSTRUCTIONS = {"a": "name[X]abcd", "b": "name[X]ab", "c": "name[X]", "d": "name[X]"}

    def test_first_zero_distance_wins(self):
        decision = ReverseReranker(self.RECONSTRUCTIONS.get, self.MR_TEXT).rerank(["a", "b", "c", "d"])
        assert decision.chosen == 2
        assert decision.rule == RerankRule.ZERO_EDIT_DISTANCE
        assert decision.diagnostics == (4.0, 2.0, 0.0, 0.0)

    def test_fallback_to_rank_zero(self):
        decision = ReverseReranker(self.RECONSTRUCTIONS.get, self.MR_TEXT).rerank(["b", "a"])
        assert decision.chosen == 0
        assert decision.rule == RerankRule.FALLBACK_TOP1

    def test_empty_list(self):
        with pytest.raises(EmptyNBest):
            ReverseReranker(self.RECONSTRUCTIONS.get, self.MR_TEXT).rerank([])

    def test_with_a_model(self, tiny_config):
        vocab = build_vocab(["name[X]", "X is here."])
        params = ModelParams.initialize(tiny_config, len(vocab), seed=3)
        nbest = beam_search(params, vocab.encode_source("name[X]"), beam_width=3, alpha=0.6, max_len=8)
        decision = reverse_rerank(nbest, "name[X]", params, vocab, max_len=8)
        assert 0 <= decision.chosen < len(nbest)
        assert len(decision.diagnostics) == len(nbest)

    def test_reconstructor_is_deterministic(self, tiny_params):
        vocab = build_vocab(["ab"])
        reconstruct = make_reconstructor(tiny_params, vocab, max_len=5)
        assert reconstruct("ab") == reconstruct("ab")
        assert len(reconstruct("ba")) <= 5


class TestClassifierReranker:
    MR = MeaningRepresentation.from_slots({"name": "X", "area": "riverside"})

    def test_probabilities_pick_first_accepted(self, lexicon):
        weights = ClassifierWeights(weights=(0.0, 0.0, 0.0, 0.0, 4.0, 0.0, 0.0), bias=-2.0)
        candidates = ["X is nice.", "X is by the river.", "X is in riverside."]
        decision = ClassifierReranker(self.MR, weights, lexicon).rerank(candidates)
        assert decision.chosen == 1
        assert decision.rule == RerankRule.CLASSIFIER_ACCEPT
        assert decision.diagnostics[0] < 0.5 <= decision.diagnostics[1]

    def test_nothing_accepted(self, lexicon):
        weights = ClassifierWeights(weights=(0.0,) * NUM_FEATURES, bias=-1.0)
        decision = classifier_rerank(["a", "b"], self.MR, weights, lexicon)
        assert decision == RerankDecision(
            chosen=0, rule=RerankRule.FALLBACK_TOP1, diagnostics=decision.diagnostics
        )
        assert all(p < 0.5 for p in decision.diagnostics)

    def test_accepts_nbest_entries(self, lexicon):
        entries = [NBestEntry(rank=0, raw_score=-1.0, normalized_score=-1.0, text="X is by the riverside.")]
        decision = classifier_rerank(entries, self.MR, ClassifierWeights.zeros(), lexicon)
        assert decision.chosen == 0
        assert decision.rule == RerankRule.CLASSIFIER_ACCEPT

    def test_empty_list(self, lexicon):
        with pytest.raises(EmptyNBest):
            classifier_rerank([], self.MR, ClassifierWeights.zeros(), lexicon)


class TestForwardReranker:
    def test_always_rank_zero(self):
        decision = ForwardReranker().rerank(["first", "second"])
        assert decision.chosen == 0
        assert decision.rule == RerankRule.FALLBACK_TOP1
        assert decision.as_line() == "chosen=0 rule=fallback-top1 diagnostics=[0 0]"


def test_nbest_list_needs_vocabulary(tiny_params):
    nbest = beam_search(tiny_params, [4, 2], beam_width=2, alpha=0.0, max_len=4)
    with pytest.raises(ValueError):
        candidate_texts(nbest)


# ============================================================================
# OMISSION REPAIR ON TEMPLATE-GENERATED N-BEST LISTS
# ============================================================================

VALUES = {
    "name": ["Blue Spice", "The Mill", "Aromi", "Cocum", "Strada", "The Eagle", "Zizzi", "Alimentum"],
    "eatType": ["pub", "restaurant", "coffee shop"],
    "food": ["Chinese", "English", "French", "Indian", "Italian", "Japanese"],
    "priceRange": ["cheap", "moderate", "less than £20", "more than £30", "£20-25"],
    "customer rating": ["low", "average", "1 out of 5", "3 out of 5", "5 out of 5"],
    "area": ["city centre", "riverside"],
    "familyFriendly": ["yes", "no"],
    "near": ["Avalon", "Burger King", "Café Rouge", "Clare Hall", "The Bakers", "All Bar One"],
}


def random_mr(rng: np.random.Generator) -> MeaningRepresentation:
    slots = {"name": str(rng.choice(VALUES["name"]))}
    for slot in list(VALUES)[1:]:
        if rng.random() < 0.5:
            slots[slot] = str(rng.choice(VALUES[slot]))
    if len(slots) == 1:
        slots["eatType"] = str(rng.choice(VALUES["eatType"]))
    return MeaningRepresentation.from_slots(slots)


def realize(mr: MeaningRepresentation, skip: str = "") -> str:
    s = {slot: value for slot, value in mr.pairs if slot != skip}
    text = f"{s['name']} is a {s.get('eatType', 'place')}"
    if "food" in s:
        text += f" serving {s['food']} food"
    if "priceRange" in s:
        text += f" with a {s['priceRange']} price range"
    if "customer rating" in s:
        text += f". It has a customer rating of {s['customer rating']}"
    if "area" in s:
        text += f". It is in the {s['area']}"
    if "familyFriendly" in s:
        text += ". It is family friendly" if s["familyFriendly"] == "yes" else ". It is not family friendly"
    if "near" in s:
        text += f". It is near {s['near']}"
    return text + "."


def test_classifier_reranking_repairs_omissions(lexicon):
    rng = np.random.default_rng(2024)
    corpus = [(mr, realize(mr)) for mr in (random_mr(rng) for _ in range(120))]
    triplets = make_omission_dataset(corpus, build_slot_catalog(corpus), AugmentConfig(seed=5))
    weights = train_logreg(balance(triplets), lexicon, LogregHyper(epochs=2000))

    top1_omissions = 0
    selected_omissions = 0
    cases = 200
    for _ in range(cases):
        mr = random_mr(rng)
        dropped = str(rng.choice([slot for slot in mr.slot_types if slot != "name"]))
        candidates = [realize(mr, skip=dropped), realize(mr)]
        chosen = candidates[classifier_rerank(candidates, mr, weights, lexicon).chosen]
        top1_omissions += bool(missing_slots(mr, candidates[0], lexicon))
        selected_omissions += bool(missing_slots(mr, chosen, lexicon))

    assert top1_omissions == cases
    assert selected_omissions <= 0.05 * cases
    assert selected_omissions < top1_omissions


def test_template_realizes_every_slot(lexicon):
    rng = np.random.default_rng(1)
    for _ in range(50):
        mr = random_mr(rng)
        assert missing_slots(mr, realize(mr), lexicon) == (), serialize_mr(mr)
