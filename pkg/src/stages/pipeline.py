"""
Pipeline - runs stages and keeps a log of what ran

LEARNING POINTS:
- One entry point per CLI subcommand
- Stages run sequentially; a stage's own parallelism (decode workers) is
  internal to it
- run_log records every stage with its artifacts for the CLI summary
"""

from typing import Any, Dict, List

from src.core.base_stage import BaseStage, StageResult
from src.stages.augment_stage import AugmentStage
from src.stages.decode_stage import DecodeStage
from src.stages.evaluate_stage import EvaluateStage
from src.stages.rerank_stage import RerankStage
from src.stages.train_stage import TrainStage
from src.utils.config import Direction, Settings
from src.utils.logger import setup_logger

COMMANDS = ("augment", "train", "decode", "rerank", "evaluate")


class Pipeline:
    """
    Usage:
        pipeline = Pipeline(load_settings(Path("run.env")))
        await pipeline.train("forward")
        await pipeline.decode()
    """

    def __init__(self, settings: Settings):
        self.settings = settings
        self.logger = setup_logger("Pipeline")
        self.run_log: List[Dict[str, Any]] = []

    async def _run_stage(self, stage: BaseStage) -> StageResult:
        try:
            result = await stage.execute()
        except Exception as e:
            self.run_log.append({"stage": stage.name, "status": "failed", "error": str(e)})
            raise
        self.run_log.append({
            "stage": stage.name,
            "status": "ok",
            "artifacts": [str(p) for p in result.artifacts],
        })
        return result

    async def augment(self) -> StageResult:
        return await self._run_stage(AugmentStage(self.settings))

    async def train(self, direction: Direction = "forward") -> StageResult:
        return await self._run_stage(TrainStage(self.settings, direction))

    async def decode(self) -> StageResult:
        return await self._run_stage(DecodeStage(self.settings))

    async def rerank(self) -> StageResult:
        return await self._run_stage(RerankStage(self.settings))

    async def evaluate(self) -> StageResult:
        return await self._run_stage(EvaluateStage(self.settings))

    async def run(self, command: str, **kwargs: Any) -> StageResult:
        if command not in COMMANDS:
            raise ValueError(f"Unknown command: {command}")
        self.logger.info(f"Running {command}")
        return await getattr(self, command)(**kwargs)
