"""
Error hierarchy for the char2char pipeline.

LEARNING POINTS:
- One root class (NLGError) so the CLI can catch everything it knows about
- Every class carries the process exit code the CLI should use
- Errors subclass Exception, not ValueError, so pydantic validators let them
  through unchanged instead of wrapping them in a ValidationError

Exit codes:
    1 - usage / configuration error
    2 - data error
    3 - internal numeric error
"""

from typing import Optional


class NLGError(Exception):
    """Base class for every error raised by the pipeline."""

    exit_code: int = 2


# ============================================================================
# CONFIGURATION ERRORS (exit code 1)
# ============================================================================

class ConfigError(NLGError):
    """Settings could not be loaded or are inconsistent."""

    exit_code = 1


class MissingPath(ConfigError):
    """A path required by a stage is unset or does not exist."""

    def __init__(self, field: str, path: Optional[object] = None):
        self.field = field
        self.path = path
        super().__init__(f"Required path '{field}' is missing: {path}")


class MissingCheckpoint(ConfigError):
    """A decode/rerank mode needs a checkpoint that is not available."""

    def __init__(self, mode: str, path: Optional[object] = None):
        self.mode = mode
        self.path = path
        super().__init__(f"Mode '{mode}' requires a checkpoint, none found at {path}")


# ============================================================================
# DATA ERRORS (exit code 2)
# ============================================================================

class DataError(NLGError):
    """Input data is malformed or violates a precondition."""

    exit_code = 2


class MRError(DataError):
    """A meaning representation could not be parsed or built."""


class EmptyInput(MRError):
    def __init__(self):
        super().__init__("Meaning representation text is empty")


class UnknownSlot(MRError):
    def __init__(self, key: str):
        self.key = key
        super().__init__(f"Unknown slot: {key!r}")


class MalformedItem(MRError):
    def __init__(self, item: str, reason: str = "expected key[value]"):
        self.item = item
        super().__init__(f"Malformed MR item {item!r}: {reason}")


class DuplicateSlot(MRError):
    def __init__(self, key: str):
        self.key = key
        super().__init__(f"Duplicate slot: {key!r}")


class EmptyCorpus(DataError):
    def __init__(self, what: str = "corpus"):
        super().__init__(f"Cannot build from an empty {what}")


class MissingHeader(DataError):
    def __init__(self, path: object, columns: tuple = ()):
        self.path = path
        self.columns = columns
        super().__init__(f"{path}: header must contain columns {list(columns)}")


class RowParseError(DataError):
    def __init__(self, line: Optional[int], reason: str):
        self.line = line
        super().__init__(f"line {line}: {reason}")


class MrParseError(DataError):
    def __init__(self, line: int, cause: MRError):
        self.line = line
        self.cause = cause
        super().__init__(f"line {line}: {cause}")


class CheckpointError(DataError):
    """Base class for checkpoint persistence failures."""


class VersionMismatch(CheckpointError):
    def __init__(self, found: object, expected: int):
        self.found = found
        self.expected = expected
        super().__init__(f"Checkpoint format_version {found!r} is not supported (expected {expected})")


class CorruptCheckpoint(CheckpointError):
    pass


class CheckpointIOError(CheckpointError):
    pass


class CatalogMissingSlot(DataError):
    def __init__(self, slot: str):
        self.slot = slot
        super().__init__(f"Slot catalog has no values for {slot!r}")


class TooFewSlots(DataError):
    def __init__(self, mr_text: str):
        self.mr_text = mr_text
        super().__init__(f"MR has no removable slot: {mr_text}")


class LexiconMissingValue(DataError):
    def __init__(self, slot: str, value: str):
        self.slot = slot
        self.value = value
        super().__init__(f"Lexicon has no phrases for {slot}[{value}] and literal fallback is off")


class LexiconFormatError(DataError):
    def __init__(self, line: int, reason: str):
        self.line = line
        super().__init__(f"lexicon line {line}: {reason}")


class DegenerateLabels(DataError):
    def __init__(self, labels: set):
        super().__init__(f"Training data needs both labels, found only {sorted(labels)}")


class EmptyNBest(DataError):
    def __init__(self):
        super().__init__("Cannot re-rank an empty n-best list")


class LengthMismatch(DataError):
    def __init__(self, hypotheses: int, references: int):
        super().__init__(f"{hypotheses} hypotheses but {references} reference sets")


class EmptyReferences(DataError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"Reference set {index} is empty")


class IdOutOfRange(DataError):
    def __init__(self, token_id: int, vocab_size: int):
        super().__init__(f"Token id {token_id} outside vocabulary of size {vocab_size}")


class EmptySequence(DataError):
    def __init__(self, what: str = "source"):
        super().__init__(f"{what} sequence is empty")


# ============================================================================
# NUMERIC ERRORS (exit code 3)
# ============================================================================

class NumericError(NLGError):
    exit_code = 3


class NonFiniteLoss(NumericError):
    def __init__(self, epoch: int, pair_index: int, loss: float, params_finite: bool = True):
        self.epoch = epoch
        self.pair_index = pair_index
        self.loss = loss
        self.params_finite = params_finite
        state = "finite" if params_finite else "already non-finite"
        super().__init__(
            f"Non-finite loss {loss} at epoch {epoch}, pair {pair_index} (parameters {state}); "
            f"lower the learning rate or the clip norm"
        )
