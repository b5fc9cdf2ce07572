"""
RerankStage - re-select outputs from n-best files written by an earlier decode

The n-best files may also come from another system as long as they follow
the `rank ||| raw ||| normalized ||| text` record format.
"""

import asyncio
from pathlib import Path
from typing import Dict, Optional

from src.core.base_stage import BaseStage, StageResult
from src.core.errors import MissingPath
from src.stages.decode_stage import nbest_path, rule_counts, write_selection
from src.stages.selection import check_checkpoints, load_resources, mode_checkpoints, mode_paths
from src.tools.corpus import load_mrs
from src.tools.nbest_io import parse_nbest
from src.utils.config import Settings


class RerankStage(BaseStage):
    def __init__(self, settings: Settings):
        super().__init__("rerank", settings)

    @property
    def description(self) -> str:
        return f"Re-rank existing n-best lists with the {self.settings.mode} rule"

    def required_paths(self) -> Dict[str, Optional[Path]]:
        return {
            "input_csv": self.settings.input_csv,
            "nbest_dir": self.out_dir / "nbest",
            **mode_paths(self.settings),
        }

    def validate(self) -> None:
        super().validate()
        check_checkpoints(self.settings, mode_checkpoints(self.settings))

    async def _run(self) -> StageResult:
        s = self.settings
        mrs = await asyncio.to_thread(load_mrs, s.input_csv, s.mr_column)
        resources = load_resources(s)

        results = []
        for index, mr in enumerate(mrs):
            path = nbest_path(self.out_dir, index)
            if not path.is_file():
                raise MissingPath(f"nbest[{index}]", path)
            entries = parse_nbest(await self._read(path))
            decision = await asyncio.to_thread(resources.select, mr, [e.text for e in entries])
            results.append((entries, decision))

        selected, decisions = write_selection(mrs, results)
        await self._write(self.out_dir / "selected.txt", selected)
        await self._write(self.out_dir / "decisions.log", decisions)
        return self._result(mrs=len(mrs), rules=rule_counts(d for _, d in results))
