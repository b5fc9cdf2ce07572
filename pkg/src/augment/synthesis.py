"""
Synthetic adequacy data: edit an MR, keep its reference, label the result.

LEARNING POINTS:
- Omission data: add every absent slot one at a time (value drawn from the
  slot catalog) -> the RF now omits that slot -> label 0
- Addition data: remove every present slot except name -> the RF now
  mentions something the MR lacks -> label 0
- The untouched (MR, RF) pair is the label-1 example
- Each pair gets its own PRNG stream derived from (seed, pair index), so the
  output does not depend on how pairs are scheduled

Usage:
    cfg = AugmentConfig(seed=7, mode="omission")
    triplets = balance(make_dataset(pairs, catalog, cfg))
"""

from typing import Any, Iterable, List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.core.errors import CatalogMissingSlot, TooFewSlots
from src.core.mr import SLOT_ORDER, MeaningRepresentation, SlotCatalog, serialize_mr
from src.utils.logger import setup_logger

logger = setup_logger("Augment")


class AugmentConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    seed: int = Field(0, ge=0)
    mode: Literal["omission", "addition"] = "omission"


class Triplet(BaseModel):
    """(MR, RF, label); label 1 = adequate original, 0 = artificial mismatch."""

    model_config = ConfigDict(frozen=True)

    mr: MeaningRepresentation
    rf: str = Field(min_length=1)
    label: Literal[0, 1]
    source_index: int = 0


class AugmentStats(BaseModel):
    pairs: int = 0
    positives: int = 0
    negatives: int = 0
    collisions: int = 0

    def as_line(self) -> str:
        return (
            f"pairs={self.pairs} positives={self.positives} "
            f"negatives={self.negatives} collisions={self.collisions}"
        )


def _unpack(pair: Any) -> Tuple[MeaningRepresentation, str]:
    if hasattr(pair, "mr"):
        return pair.mr, pair.rf
    return pair[0], pair[1]


def pair_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, index])


def make_omission_dataset(
    pairs: Sequence[Any],
    catalog: SlotCatalog,
    cfg: AugmentConfig,
    stats: Optional[AugmentStats] = None,
) -> List[Triplet]:
    """
    One positive per pair, then one negative per absent slot in canonical order.

    Raises:
        CatalogMissingSlot: an absent slot has no catalog values
    """
    stats = stats if stats is not None else AugmentStats()
    triplets: List[Triplet] = []

    for index, pair in enumerate(pairs):
        mr, rf = _unpack(pair)
        rng = pair_rng(cfg.seed, index)
        triplets.append(Triplet(mr=mr, rf=rf, label=1, source_index=index))
        stats.pairs += 1
        stats.positives += 1

        for slot in SLOT_ORDER:
            if slot in mr:
                continue
            if not catalog.covers(slot):
                raise CatalogMissingSlot(slot)
            value = catalog.sample(slot, rng)
            if value.casefold() in rf.casefold():
                stats.collisions += 1
            triplets.append(Triplet(mr=mr.with_slot(slot, value), rf=rf, label=0, source_index=index))
            stats.negatives += 1

    logger.info(f"omission dataset: {stats.as_line()}")
    return triplets


def make_addition_dataset(
    pairs: Sequence[Any],
    cfg: AugmentConfig,
    stats: Optional[AugmentStats] = None,
) -> List[Triplet]:
    """
    One positive per pair, then one negative per removable slot (all but name).

    Raises:
        TooFewSlots: an MR has nothing but its name
    """
    stats = stats if stats is not None else AugmentStats()
    triplets: List[Triplet] = []

    for index, pair in enumerate(pairs):
        mr, rf = _unpack(pair)
        removable = [slot for slot, _ in mr.pairs if slot != "name"]
        if not removable:
            raise TooFewSlots(serialize_mr(mr))
        triplets.append(Triplet(mr=mr, rf=rf, label=1, source_index=index))
        stats.pairs += 1
        stats.positives += 1
        for slot in removable:
            triplets.append(Triplet(mr=mr.without_slot(slot), rf=rf, label=0, source_index=index))
            stats.negatives += 1

    logger.info(f"addition dataset: {stats.as_line()}")
    return triplets


def make_dataset(
    pairs: Sequence[Any],
    catalog: Optional[SlotCatalog],
    cfg: AugmentConfig,
    stats: Optional[AugmentStats] = None,
) -> List[Triplet]:
    if cfg.mode == "omission":
        if catalog is None:
            raise ValueError("omission mode needs a slot catalog")
        return make_omission_dataset(pairs, catalog, cfg, stats)
    return make_addition_dataset(pairs, cfg, stats)


def balance(triplets: Iterable[Triplet]) -> List[Triplet]:
    """
    Replicate each pair's positive once per negative of the same pair.

    A pair with no negatives keeps a single positive. Output groups follow
    the first appearance of each source_index: positives first, then negatives.
    """
    groups: dict = {}
    for triplet in triplets:
        positives, negatives = groups.setdefault(triplet.source_index, ([], []))
        (positives if triplet.label == 1 else negatives).append(triplet)

    balanced: List[Triplet] = []
    for positives, negatives in groups.values():
        copies = max(1, len(negatives))
        for positive in positives:
            balanced.extend([positive] * copies)
        balanced.extend(negatives)
    return balanced
