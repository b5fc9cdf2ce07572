"""
TrainStage - fit the forward model, the reverse model, or the classifier

LEARNING POINTS:
- forward: canonical MR string -> reference
- reverse: reference -> canonical MR string (used to reconstruct MRs)
- classifier: balanced omission triplets -> logistic regression
- Both seq2seq directions share one vocabulary built from the MR strings
  and references of the corpus, in corpus order
- The per-epoch lines are also written to out_dir/logs/train_<direction>.log
- With dev_csv set, held-out loss and char accuracy are reported after
  training (seq2seq directions only)
"""

import asyncio
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from src.adequacy.classifier import LogregHyper, train_logreg
from src.adequacy.lexicon import load_lexicon
from src.augment.synthesis import AugmentConfig, balance, make_omission_dataset
from src.core.base_stage import BaseStage, StageResult
from src.core.mr import build_slot_catalog, serialize_mr
from src.core.errors import EmptyCorpus
from src.core.vocab import Vocabulary, build_vocab
from src.model.trainer import EpochStats, Seq2SeqTrainer, TrainHyper, held_out_stats
from src.stages.selection import lexicon_paths
from src.tools.checkpoint import checkpoint_from_classifier, checkpoint_from_model, checkpoint_to_json
from src.tools.corpus import CorpusPair, load_csv
from src.tools.text_files import lines_to_text
from src.utils.config import Direction, Settings


def corpus_vocab(pairs: List[CorpusPair]) -> Vocabulary:
    texts = []
    for pair in pairs:
        texts.append(serialize_mr(pair.mr))
        texts.append(pair.rf)
    return build_vocab(texts)


def text_pairs(pairs: List[CorpusPair], direction: str) -> List[Tuple[str, str]]:
    """(source, target) strings for one training direction."""
    if direction == "reverse":
        return [(p.rf, serialize_mr(p.mr)) for p in pairs]
    return [(serialize_mr(p.mr), p.rf) for p in pairs]


class TrainStage(BaseStage):
    def __init__(self, settings: Settings, direction: Direction = "forward"):
        super().__init__(f"train.{direction}", settings)
        self.direction = direction

    @property
    def description(self) -> str:
        return f"Train the {self.direction} model"

    def required_paths(self) -> Dict[str, Optional[Path]]:
        paths = {"train_csv": self.settings.train_csv}
        if self.settings.dev_csv is not None and self.direction != "classifier":
            paths["dev_csv"] = self.settings.dev_csv
        if self.direction == "classifier":
            paths.update(lexicon_paths(self.settings))
        return paths

    async def _run(self) -> StageResult:
        s = self.settings
        pairs = await asyncio.to_thread(load_csv, s.train_csv, s.mr_column, s.ref_column)
        if not pairs:
            raise EmptyCorpus("training corpus")
        if self.direction == "classifier":
            return await self._train_classifier(pairs)
        return await self._train_seq2seq(pairs)

    async def _train_seq2seq(self, pairs: List[CorpusPair]) -> StageResult:
        s = self.settings
        vocab = corpus_vocab(pairs)
        id_pairs = [
            (vocab.encode_source(src), vocab.encode_target(tgt))
            for src, tgt in text_pairs(pairs, self.direction)
        ]
        hyper = TrainHyper(lr=s.learning_rate, epochs=s.epochs, clip_norm=s.clip_norm, seed=s.seed)
        trainer = Seq2SeqTrainer(s.network_config(), len(vocab), hyper)
        self.logger.info(f"{len(id_pairs)} pairs, vocabulary of {len(vocab)} symbols")

        params = await asyncio.to_thread(trainer.fit, id_pairs)
        final: EpochStats = trainer.history[-1]
        metrics = {"loss": final.loss, "char_accuracy": final.char_accuracy}
        if s.dev_csv is not None:
            metrics.update(await self._held_out(params, vocab))

        checkpoint = checkpoint_from_model(params, vocab, metadata={
            "direction": self.direction,
            "epochs": s.epochs,
            "seed": s.seed,
            **metrics,
        })
        await self._write(s.checkpoint_path(self.direction), checkpoint_to_json(checkpoint))
        await self._write(
            self.out_dir / "logs" / f"train_{self.direction}.log",
            lines_to_text(stats.as_line() for stats in trainer.history),
        )
        return self._result(pairs=len(pairs), **metrics)

    async def _held_out(self, params, vocab: Vocabulary) -> Dict[str, float]:
        s = self.settings
        dev = await asyncio.to_thread(load_csv, s.dev_csv, s.mr_column, s.ref_column)
        if not dev:
            raise EmptyCorpus("dev corpus")
        id_pairs = [
            (vocab.encode_source(src), vocab.encode_target(tgt))
            for src, tgt in text_pairs(dev, self.direction)
        ]
        loss, accuracy = await asyncio.to_thread(held_out_stats, params, id_pairs)
        self.logger.info(f"dev loss={loss:.6f} char_accuracy={accuracy:.4f} on {len(dev)} pairs")
        return {"dev_loss": loss, "dev_char_accuracy": accuracy}

    async def _train_classifier(self, pairs: List[CorpusPair]) -> StageResult:
        s = self.settings
        lex = load_lexicon(s.lexicon_path, s.literal_fallback)
        triplets = balance(make_omission_dataset(
            pairs, build_slot_catalog(pairs), AugmentConfig(seed=s.seed, mode="omission")
        ))
        hyper = LogregHyper(lr=s.logreg_lr, epochs=s.logreg_epochs, l2=s.logreg_l2, seed=s.seed)
        weights = await asyncio.to_thread(train_logreg, triplets, lex, hyper)

        checkpoint = checkpoint_from_classifier(weights, metadata={
            "triplets": len(triplets),
            "seed": s.seed,
        })
        await self._write(s.checkpoint_path("classifier"), checkpoint_to_json(checkpoint))
        return self._result(triplets=len(triplets), weights=list(weights.weights), bias=weights.bias)
