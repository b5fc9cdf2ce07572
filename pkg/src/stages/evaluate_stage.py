"""
EvaluateStage - BLEU and slot-coverage reports for a hypothesis file

Hypothesis line i is scored against the references of the i-th distinct MR
of references_csv (first-occurrence order).

Output:
    out_dir/reports/bleu.txt       key=value
    out_dir/reports/coverage.txt   key=value
    out_dir/reports/summary.json
"""

import asyncio
from pathlib import Path
from typing import Dict, Optional

from src.adequacy.lexicon import load_lexicon
from src.core.base_stage import BaseStage, StageResult
from src.core.errors import LengthMismatch
from src.core.mr import parse_mr
from src.evaluation.bleu import bleu
from src.evaluation.coverage import (
    coverage_report,
    known_words,
    nonword_report,
    oracle_report,
    render_summary,
)
from src.stages.decode_stage import nbest_path
from src.stages.selection import lexicon_paths
from src.tools.corpus import group_references, load_csv
from src.tools.nbest_io import parse_nbest
from src.tools.text_files import lines_to_text
from src.utils.config import Settings


class EvaluateStage(BaseStage):
    def __init__(self, settings: Settings):
        super().__init__("evaluate", settings)

    @property
    def description(self) -> str:
        return "Score hypotheses with corpus BLEU and slot coverage"

    def required_paths(self) -> Dict[str, Optional[Path]]:
        paths = {
            "references_csv": self.settings.references_csv,
            "hypotheses_path": self.settings.hypotheses_path,
        }
        if self.settings.train_csv is not None:
            paths["train_csv"] = self.settings.train_csv
        paths.update(lexicon_paths(self.settings))
        return paths

    async def _run(self) -> StageResult:
        s = self.settings
        pairs = await asyncio.to_thread(load_csv, s.references_csv, s.mr_column, s.ref_column)
        grouped = group_references(pairs)
        hypotheses = (await self._read(s.hypotheses_path)).splitlines()
        if len(hypotheses) != len(grouped):
            raise LengthMismatch(len(hypotheses), len(grouped))

        mrs = [parse_mr(key) for key in grouped]
        lex = load_lexicon(s.lexicon_path, s.literal_fallback)

        bleu_report = bleu(hypotheses, list(grouped.values()), smoothing=s.bleu_smoothing)
        coverage = coverage_report(zip(mrs, hypotheses), lex)

        await self._write(self.out_dir / "reports" / "bleu.txt", lines_to_text(bleu_report.as_lines()))
        coverage_lines = coverage.as_lines()
        summary = {"bleu": bleu_report.model_dump(), "coverage": coverage.summary()}

        oracle = await self._oracle(mrs, lex)
        if oracle is not None:
            coverage_lines += oracle.as_lines()
            summary["oracle"] = {**oracle.model_dump(exclude={"by_arity"}), "oracle_rate": oracle.oracle_rate}

        if s.train_csv is not None:
            train = await asyncio.to_thread(load_csv, s.train_csv, s.mr_column, s.ref_column)
            nonwords = nonword_report(hypotheses, known_words(p.rf for p in train))
            coverage_lines += nonwords.as_lines()
            summary["nonwords"] = {**nonwords.model_dump(), "rate": nonwords.rate}

        await self._write(self.out_dir / "reports" / "coverage.txt", lines_to_text(coverage_lines))
        await self._write(self.out_dir / "reports" / "summary.json", render_summary(**summary))

        self.logger.info(f"BLEU={bleu_report.bleu:.4f} omission_rate={coverage.omission_rate:.4f}")
        return self._result(bleu=bleu_report.bleu, omission_rate=coverage.omission_rate)

    async def _oracle(self, mrs, lex):
        """Oracle report over out_dir/nbest when one file exists per MR."""
        paths = [nbest_path(self.out_dir, i) for i in range(len(mrs))]
        if not mrs or not all(p.is_file() for p in paths):
            return None
        lists = [[e.text for e in parse_nbest(await self._read(p))] for p in paths]
        return oracle_report(zip(mrs, lists), lex)
