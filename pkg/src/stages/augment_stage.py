"""
AugmentStage - write balanced omission and addition triplet files

Output:
    out_dir/augment/omission.csv   (mr, ref, label)
    out_dir/augment/addition.csv
"""

import asyncio
from pathlib import Path
from typing import Dict, Optional

from src.augment.synthesis import AugmentConfig, AugmentStats, balance, make_dataset
from src.core.base_stage import BaseStage, StageResult
from src.core.mr import SlotCatalog, build_slot_catalog
from src.tools.corpus import load_csv, triplets_to_csv_text
from src.utils.config import Settings


class AugmentStage(BaseStage):
    def __init__(self, settings: Settings):
        super().__init__("augment", settings)

    @property
    def description(self) -> str:
        return "Build synthetic omission/addition triplets from the training corpus"

    def required_paths(self) -> Dict[str, Optional[Path]]:
        return {"train_csv": self.settings.train_csv}

    async def _run(self) -> StageResult:
        s = self.settings
        pairs = await asyncio.to_thread(load_csv, s.train_csv, s.mr_column, s.ref_column)
        catalog = build_slot_catalog(pairs) if pairs else SlotCatalog(counts={})

        details = {}
        for mode in ("omission", "addition"):
            stats = AugmentStats()
            triplets = make_dataset(pairs, catalog, AugmentConfig(seed=s.seed, mode=mode), stats)
            balanced = balance(triplets)
            text = triplets_to_csv_text(balanced, s.mr_column, s.ref_column)
            await self._write(self.out_dir / "augment" / f"{mode}.csv", text)
            details[mode] = {**stats.model_dump(), "balanced": len(balanced)}
            self.logger.info(f"{mode}: {stats.as_line()} balanced={len(balanced)}")

        return self._result(**details)
