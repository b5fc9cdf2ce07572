"""
BaseStage - Abstract base class for pipeline stages

LEARNING POINTS:
- Template Method Pattern: execute() validates, runs, logs; subclasses
  implement _run()
- Paths are validated before any work starts, so a typo fails in
  milliseconds instead of after an hour of training
- Numeric work runs in worker threads (asyncio.to_thread) while file
  writes go through aiofiles
- Errors are logged and re-raised; the CLI turns them into exit codes

Workflow:
1. Log stage start
2. Validate required paths
3. Run the stage body
4. Log the artifacts written
5. Return a StageResult
"""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from src.core.errors import MissingPath
from src.tools.text_files import read_text, write_text
from src.utils.config import Settings
from src.utils.logger import setup_logger


class StageResult(BaseModel):
    """What a stage produced: files written plus a few summary numbers."""

    stage: str
    artifacts: List[Path] = Field(default_factory=list)
    details: Dict[str, Any] = Field(default_factory=dict)


class BaseStage(ABC):
    """
    Abstract base class for all pipeline stages.

    A stage is one CLI subcommand's worth of work: augment, train, decode,
    rerank or evaluate. It reads its inputs from Settings and writes its
    artifacts under settings.out_dir.
    """

    def __init__(self, name: str, settings: Settings):
        self.name = name
        self.settings = settings
        self.logger = setup_logger(f"Stage.{name}")
        self.artifacts: List[Path] = []

    @property
    @abstractmethod
    def description(self) -> str:
        pass

    def required_paths(self) -> Dict[str, Optional[Path]]:
        """field name -> path that must exist before the stage runs."""
        return {}

    def validate(self) -> None:
        """
        Raises:
            MissingPath: a required path is unset or missing on disk
        """
        for field, path in self.required_paths().items():
            if path is None or not Path(path).exists():
                raise MissingPath(field, path)

    async def execute(self) -> StageResult:
        self.logger.info(f"Starting: {self.description}")
        try:
            self.validate()
            result = await self._run()
            self.logger.info(f"Completed, {len(result.artifacts)} artifacts written")
            return result
        except Exception as e:
            self.logger.error(f"{type(e).__name__}: {e}")
            raise

    @abstractmethod
    async def _run(self) -> StageResult:
        pass

    # ========================================================================
    # HELPERS
    # ========================================================================

    @property
    def out_dir(self) -> Path:
        return Path(self.settings.out_dir)

    async def _write(self, path: Path, content: str) -> Path:
        await write_text(path, content)
        self.artifacts.append(Path(path))
        self.logger.debug(f"wrote {path} ({len(content)} chars)")
        return Path(path)

    async def _read(self, path: Path) -> str:
        return await read_text(path)

    def _result(self, **details: Any) -> StageResult:
        return StageResult(stage=self.name, artifacts=list(self.artifacts), details=details)


# LEARNING QUESTIONS:
# Q1: Why keep validate() separate from _run()?
# A1: Every stage gets the same fail-fast check for free, and tests can call
#     validate() alone to check configuration errors.

# Q2: Why do stages collect artifacts in a list?
# A2: The pipeline's run log and the CLI summary report exactly which files a
#     run produced, in the order they were written.
