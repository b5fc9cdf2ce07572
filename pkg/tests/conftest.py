"""Shared fixtures: the six sample (MR, prediction) rows and tiny models."""

from pathlib import Path
from typing import List, Tuple

import numpy as np
import pytest

from src.adequacy.lexicon import load_lexicon
from src.core.mr import MeaningRepresentation, parse_mr
from src.model.params import ModelConfig, ModelParams

SAMPLE_ROWS: List[Tuple[str, str]] = [
    (
        "name[Blue Spice], eatType[coffee shop], area[city centre]",
        "Blue Spice is a coffee shop located in the city centre.",
    ),
    (
        "name[Blue Spice], eatType[coffee shop], customer rating[5 out of 5], near[Crowne Plaza Hotel]",
        "Blue Spice is a coffee shop near Crowne Plaza Hotel with a customer rating of 5 out of 5.",
    ),
    (
        "name[The Cricketers], eatType[coffee shop], customer rating[1 out of 5], "
        "familyFriendly[yes], near[Avalon]",
        "The Cricketers is a children friendly coffee shop near Avalon with a customer rating of 1 out of 5.",
    ),
    (
        "name[Blue Spice], eatType[pub], food[Chinese], area[city centre], "
        "familyFriendly[no], near[Rainbow Vegetarian Café]",
        "Blue Spice is a Chinese pub located in the city centre near Rainbow Vegetarian Café. "
        "It is not family friendly.",
    ),
    (
        "name[The Mill], eatType[pub], food[English], priceRange[high], area[riverside], "
        "familyFriendly[yes], near[Raja Indian Cuisine]",
        "The Mill is a children friendly English pub with a high price range near Raja Indian "
        "Cuisine in riverside.",
    ),
    (
        "name[The Cricketers], eatType[restaurant], food[Chinese], priceRange[£20-25], "
        "customer rating[high], area[city centre], familyFriendly[no], near[All Bar One]",
        "The Cricketers is a restaurant providing Chinese food in the £20-25 price range. It is "
        "located in the city centre near All Bar One. It has a high customer rating and is not "
        "kid friendly.",
    ),
]


@pytest.fixture
def sample_rows() -> List[Tuple[str, str]]:
    return list(SAMPLE_ROWS)


@pytest.fixture
def sample_pairs() -> List[Tuple[MeaningRepresentation, str]]:
    return [(parse_mr(mr), rf) for mr, rf in SAMPLE_ROWS]


@pytest.fixture
def blue_spice() -> MeaningRepresentation:
    return parse_mr(SAMPLE_ROWS[0][0])


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon()


@pytest.fixture
def tiny_config() -> ModelConfig:
    return ModelConfig(embed_dim=4, hidden_dim=5, encoder_layers=1, decoder_layers=2, init_scale=0.3)


@pytest.fixture
def tiny_params(tiny_config) -> ModelParams:
    return ModelParams.initialize(tiny_config, vocab_size=6, seed=11)


def write_csv_file(path: Path, rows, header=("mr", "ref")) -> Path:
    """Write rows with every field quoted (RFC-4180)."""
    def quote(field: str) -> str:
        return '"' + field.replace('"', '""') + '"'

    lines = [",".join(header)] + [",".join(quote(f) for f in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def random_ids(rng: np.random.Generator, length: int, vocab_size: int = 6) -> List[int]:
    """Ids from the non-reserved range plus a final EOS (id 2)."""
    return [int(t) for t in rng.integers(4, vocab_size, size=length)] + [2]
