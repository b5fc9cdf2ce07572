"""
Configuration Management

LEARNING POINTS:
- Uses pydantic-settings for validated, typed run configuration
- Reads NLG_* environment variables and a .env file automatically
- A --config file is a key=value (dotenv) document read with python-dotenv
- CLI flags override the config file, which overrides the environment
- Invalid settings fail fast with ConfigError (exit code 1)

Precedence (highest first):
    CLI flags > --config file > NLG_* environment / .env > defaults
"""

from pathlib import Path
from typing import Any, Dict, Literal, Optional

from dotenv import dotenv_values
from pydantic import Field, ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from src.core.errors import ConfigError
from src.model.params import ModelConfig

RerankMode = Literal["forward", "reverse", "classifier"]
Direction = Literal["forward", "reverse", "classifier"]


class Settings(BaseSettings):
    """
    Run configuration (the pipeline's RunConfig).

    Defaults reproduce the best decoding setup: encoder 1 layer,
    decoder 2 layers, GRU cell, beam width 20, length penalty 1.

    Usage:
        settings = Settings()                       # env + .env
        settings = load_settings(Path("run.env"), beam_width=5)
    """

    # ========================================================================
    # PATHS
    # ========================================================================

    train_csv: Optional[Path] = None
    """Training corpus (columns mr, ref)"""

    dev_csv: Optional[Path] = None
    """Held-out pairs scored after seq2seq training (columns mr, ref)"""

    input_csv: Optional[Path] = None
    """MRs to decode/rerank (column mr; ref optional)"""

    references_csv: Optional[Path] = None
    """Multi-reference corpus for evaluate (columns mr, ref)"""

    hypotheses_path: Optional[Path] = None
    """One hypothesis per line, aligned with the distinct MRs of references_csv"""

    lexicon_path: Optional[Path] = None
    """Match lexicon TSV (defaults to the shipped src/adequacy/lexicon.tsv)"""

    forward_checkpoint: Optional[Path] = None
    reverse_checkpoint: Optional[Path] = None
    classifier_checkpoint: Optional[Path] = None

    out_dir: Path = Path("runs/default")

    mr_column: str = "mr"
    ref_column: str = "ref"

    # ========================================================================
    # MODEL
    # ========================================================================

    embed_dim: int = Field(32, ge=1)
    hidden_dim: int = Field(64, ge=1)
    encoder_layers: int = Field(1, ge=1)
    decoder_layers: int = Field(2, ge=1)
    max_decode_len: int = Field(350, ge=1)
    """Forward decoding cap (characters)"""

    max_reverse_len: int = Field(250, ge=1)
    """Reverse (RF -> MR) reconstruction cap"""

    dtype: Literal["float64", "float32"] = "float64"
    init_scale: float = Field(0.08, gt=0)

    # ========================================================================
    # TRAINING
    # ========================================================================

    learning_rate: float = Field(1e-3, ge=0)
    epochs: int = Field(20, ge=1)
    clip_norm: float = Field(5.0, gt=0)

    # ========================================================================
    # DECODING / RERANKING
    # ========================================================================

    beam_width: int = Field(20, ge=1)
    alpha: float = Field(1.0, ge=0)
    """Length-penalty exponent"""

    mode: RerankMode = "forward"
    workers: int = Field(1, ge=1)

    # ========================================================================
    # AUGMENTATION / CLASSIFIER / EVALUATION
    # ========================================================================

    seed: int = 1234
    literal_fallback: bool = True
    logreg_lr: float = Field(0.5, ge=0)
    logreg_epochs: int = Field(500, ge=1)
    logreg_l2: float = Field(1e-4, ge=0)
    bleu_smoothing: bool = False

    log_level: str = "INFO"

    model_config = SettingsConfigDict(
        env_prefix="NLG_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # ========================================================================
    # DERIVED VALUES
    # ========================================================================

    def network_config(self) -> ModelConfig:
        """ModelConfig for the forward or reverse network."""
        return ModelConfig(
            embed_dim=self.embed_dim,
            hidden_dim=self.hidden_dim,
            encoder_layers=self.encoder_layers,
            decoder_layers=self.decoder_layers,
            max_decode_len=self.max_decode_len,
            dtype=self.dtype,
            init_scale=self.init_scale,
        )

    def checkpoint_path(self, direction: Direction) -> Path:
        explicit = {
            "forward": self.forward_checkpoint,
            "reverse": self.reverse_checkpoint,
            "classifier": self.classifier_checkpoint,
        }[direction]
        return explicit or self.out_dir / "checkpoints" / f"{direction}.ckpt.json"


def load_settings(config_path: Optional[Path] = None, **overrides: Any) -> Settings:
    """
    Build Settings from an optional key=value file plus explicit overrides.

    None-valued overrides are ignored, so argparse defaults of None do not
    mask values from the config file.

    Raises:
        ConfigError: unreadable file, unknown key, or failed validation
    """
    values: Dict[str, Any] = {}
    if config_path is not None:
        if not Path(config_path).is_file():
            raise ConfigError(f"Config file not found: {config_path}")
        for key, value in dotenv_values(config_path).items():
            field = key.strip().lower()
            if field not in Settings.model_fields:
                raise ConfigError(f"{config_path}: unknown key {key!r}")
            values[field] = value
    values.update({k: v for k, v in overrides.items() if v is not None})

    try:
        return Settings(**values)
    except ValidationError as e:
        raise ConfigError(f"Invalid configuration: {e}") from e


# LEARNING QUESTIONS:
# Q1: Why does load_settings drop None overrides?
# A1: argparse leaves unset flags as None; passing them through would
#     overwrite config-file values with None and fail validation.

# Q2: What happens with an unknown key in the --config file?
# A2: ConfigError naming the key; typos would otherwise be silently ignored
#     because the environment source uses extra="ignore".

# Q3: Where does a checkpoint go when no explicit path is configured?
# A3: out_dir/checkpoints/<direction>.ckpt.json (see checkpoint_path).

# Q4: Why is there no module-level Settings instance?
# A4: Building one at import time would fail on a bad NLG_* variable before
#     the CLI can map the error to exit code 1; load_settings is the one
#     place settings are built.
