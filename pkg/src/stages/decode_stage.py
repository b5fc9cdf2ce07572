"""
DecodeStage - beam search every input MR, then select one output per MR

LEARNING POINTS:
- Decodes are independent, so they run in worker threads bounded by an
  asyncio.Semaphore (settings.workers)
- asyncio.gather returns results in submission order, so output files are
  ordered by input index however the threads interleave
- Nothing time- or thread-dependent is written, so reruns are byte-identical

Output:
    out_dir/nbest/00000.nbest ...   one file per distinct input MR
    out_dir/selected.txt            one selected utterance per line
    out_dir/decisions.log           index, MR, rule, diagnostics
"""

import asyncio
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from src.core.base_reranker import RerankDecision
from src.core.base_stage import BaseStage, StageResult
from src.core.errors import MissingCheckpoint
from src.core.mr import MeaningRepresentation, serialize_mr
from src.model.decoding import beam_search
from src.tools.checkpoint import load_checkpoint, model_from_checkpoint
from src.tools.corpus import load_mrs
from src.tools.nbest_io import NBestEntry, entries_from_nbest, format_nbest
from src.tools.text_files import lines_to_text
from src.stages.selection import (
    check_checkpoints,
    decision_line,
    load_resources,
    mode_checkpoints,
    mode_paths,
)
from src.utils.config import Settings


def nbest_path(out_dir: Path, index: int) -> Path:
    return Path(out_dir) / "nbest" / f"{index:05d}.nbest"


class DecodeStage(BaseStage):
    def __init__(self, settings: Settings):
        super().__init__("decode", settings)

    @property
    def description(self) -> str:
        return f"Beam-search decode with {self.settings.mode} re-ranking"

    def required_paths(self) -> Dict[str, Optional[Path]]:
        return {"input_csv": self.settings.input_csv, **mode_paths(self.settings)}

    def validate(self) -> None:
        super().validate()
        forward = self.settings.checkpoint_path("forward")
        if not Path(forward).is_file():
            raise MissingCheckpoint(self.settings.mode, forward)
        check_checkpoints(self.settings, mode_checkpoints(self.settings))

    async def _run(self) -> StageResult:
        s = self.settings
        mrs = await asyncio.to_thread(load_mrs, s.input_csv, s.mr_column)
        params, vocab = model_from_checkpoint(load_checkpoint(s.checkpoint_path("forward")))
        resources = load_resources(s)
        self.logger.info(
            f"{len(mrs)} MRs, beam_width={s.beam_width}, alpha={s.alpha}, workers={s.workers}"
        )

        semaphore = asyncio.Semaphore(s.workers)

        def decode_one(mr: MeaningRepresentation) -> Tuple[List[NBestEntry], RerankDecision]:
            nbest = beam_search(
                params, vocab.encode_source(serialize_mr(mr)), s.beam_width, s.alpha, s.max_decode_len
            )
            entries = entries_from_nbest(nbest, vocab)
            return entries, resources.select(mr, [e.text for e in entries])

        async def bounded(mr: MeaningRepresentation):
            async with semaphore:
                return await asyncio.to_thread(decode_one, mr)

        results = await asyncio.gather(*(bounded(mr) for mr in mrs))

        for index, (entries, _) in enumerate(results):
            await self._write(nbest_path(self.out_dir, index), format_nbest(entries))
        selected, decisions = write_selection(mrs, list(results))
        await self._write(self.out_dir / "selected.txt", selected)
        await self._write(self.out_dir / "decisions.log", decisions)

        return self._result(mrs=len(mrs), rules=rule_counts(r[1] for r in results))


def write_selection(
    mrs: List[MeaningRepresentation], results: List[Tuple[List[NBestEntry], RerankDecision]]
) -> Tuple[str, str]:
    """(selected.txt, decisions.log) contents for ordered results."""
    selected = [entries[decision.chosen].text for entries, decision in results]
    decisions = [decision_line(i, mr, d) for i, (mr, (_, d)) in enumerate(zip(mrs, results))]
    return lines_to_text(selected), lines_to_text(decisions)


def rule_counts(decisions) -> Dict[str, int]:
    counts: Dict[str, int] = {}
    for decision in decisions:
        counts[decision.rule.value] = counts.get(decision.rule.value, 0) + 1
    return counts
