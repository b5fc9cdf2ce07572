"""
Command-line entry point.

    python -m src.cli augment  --config run.env
    python -m src.cli train    --config run.env --direction reverse
    python -m src.cli decode   --config run.env --mode classifier --workers 4
    python -m src.cli rerank   --config run.env --mode reverse
    python -m src.cli evaluate --config run.env --hypotheses runs/x/selected.txt

Exit codes: 0 success, 1 usage/configuration error, 2 data error,
3 internal numeric error.
"""

import argparse
import asyncio
import sys
from pathlib import Path
from typing import List, Optional

from src.core.errors import ConfigError, NLGError
from src.stages.pipeline import Pipeline
from src.utils.config import load_settings
from src.utils.logger import set_log_level, setup_logger

EXIT_OK = 0
EXIT_USAGE = 1


class ArgumentParser(argparse.ArgumentParser):
    """argparse that exits with the usage code (1) instead of 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key=value settings file")
    common.add_argument("--seed", type=int)
    common.add_argument("--beam-width", dest="beam_width", type=int)
    common.add_argument("--alpha", type=float, help="length-penalty exponent")
    common.add_argument("--mode", choices=["forward", "reverse", "classifier"])
    common.add_argument("--workers", type=int, help="parallel decodes")
    common.add_argument("--out-dir", dest="out_dir", type=Path)
    common.add_argument("--log-level", dest="log_level")
    common.add_argument("--train", dest="train_csv", type=Path, help="training CSV (mr, ref)")
    common.add_argument("--dev", dest="dev_csv", type=Path, help="held-out CSV scored after training")
    common.add_argument("--input", dest="input_csv", type=Path, help="MRs to decode or re-rank")
    common.add_argument("--references", dest="references_csv", type=Path)
    common.add_argument("--hypotheses", dest="hypotheses_path", type=Path)
    common.add_argument("--lexicon", dest="lexicon_path", type=Path)
    common.add_argument("--epochs", type=int)
    return common


def build_parser() -> ArgumentParser:
    common = _common_flags()
    parser = ArgumentParser(
        prog="char2char",
        description="Character-level MR-to-text generation with n-best re-ranking",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)
    sub.add_parser("augment", parents=[common], help="write synthetic adequacy triplets")
    train = sub.add_parser("train", parents=[common], help="train a model")
    train.add_argument("--direction", choices=["forward", "reverse", "classifier"], default="forward")
    sub.add_parser("decode", parents=[common], help="beam-search decode and select outputs")
    sub.add_parser("rerank", parents=[common], help="re-select outputs from existing n-best files")
    sub.add_parser("evaluate", parents=[common], help="BLEU and slot-coverage reports")
    return parser


_SETTING_FLAGS = (
    "seed", "beam_width", "alpha", "mode", "workers", "out_dir", "log_level", "train_csv", "dev_csv",
    "input_csv", "references_csv", "hypotheses_path", "lexicon_path", "epochs",
)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logger = setup_logger("char2char")

    try:
        settings = load_settings(args.config, **{k: getattr(args, k) for k in _SETTING_FLAGS})
        try:
            set_log_level(settings.log_level)
        except ValueError as e:
            raise ConfigError(str(e)) from e

        kwargs = {"direction": args.direction} if args.command == "train" else {}
        result = asyncio.run(Pipeline(settings).run(args.command, **kwargs))
    except NLGError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code

    for path in result.artifacts:
        logger.info(f"wrote {path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
