"""
(MR, RF) corpus ingestion and CSV writing.

LEARNING POINTS:
- pandas parses RFC-4180 CSV (quoted fields, embedded commas, "" escapes)
- dtype=str + keep_default_na=False keeps every field as the raw string
- Files are decoded up front so bad UTF-8 surfaces as a RowParseError
  with the line of the offending byte
- Error line numbers are the physical line a record starts on; a quoted
  field may span several lines, so they come from csv.reader's line_num
- Column names are configurable to absorb header drift
"""

import csv
import io
from pathlib import Path
import re
from typing import Dict, List, Sequence, Tuple, Union

import pandas as pd
from pydantic import BaseModel, ConfigDict

from src.core.errors import MissingHeader, MissingPath, MRError, MrParseError, RowParseError
from src.core.mr import MeaningRepresentation, parse_mr, serialize_mr

PathLike = Union[str, Path]

_PANDAS_LINE = re.compile(r"line (\d+)")


class CorpusPair(BaseModel):
    """One (MR, RF) training pair; mr_text keeps the raw source field."""

    model_config = ConfigDict(frozen=True)

    mr: MeaningRepresentation
    mr_text: str
    rf: str


def _read_text(path: PathLike) -> str:
    try:
        raw = Path(path).read_bytes()
    except FileNotFoundError as e:
        raise MissingPath(str(path), path) from e
    try:
        return raw.decode("utf-8-sig")
    except UnicodeDecodeError as e:
        line = raw.count(b"\n", 0, e.start) + 1
        raise RowParseError(line, f"invalid UTF-8 byte 0x{raw[e.start]:02x}") from e


def _record_lines(text: str) -> List[int]:
    """Start line of every data record; blank lines are skipped as pandas does."""
    reader = csv.reader(io.StringIO(text))
    starts: List[int] = []
    end = 0
    try:
        for row in reader:
            if row:
                starts.append(end + 1)
            end = reader.line_num
    except csv.Error as e:
        raise RowParseError(reader.line_num, str(e)) from e
    return starts[1:]


def _read_frame(path: PathLike, columns: Sequence[str]) -> Tuple[pd.DataFrame, List[int]]:
    text = _read_text(path)
    try:
        frame = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise MissingHeader(path, tuple(columns))
    except pd.errors.ParserError as e:
        match = _PANDAS_LINE.search(str(e))
        raise RowParseError(int(match.group(1)) if match else None, str(e)) from e

    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise MissingHeader(path, tuple(columns))
    lines = _record_lines(text)
    if len(lines) != len(frame):
        lines = [offset + 2 for offset in range(len(frame))]
    return frame, lines


def _parse_row_mr(text: str, line: int) -> MeaningRepresentation:
    try:
        return parse_mr(text)
    except MRError as e:
        raise MrParseError(line, e) from e


def load_csv(path: PathLike, mr_column: str = "mr", ref_column: str = "ref") -> List[CorpusPair]:
    """
    Load (MR, RF) pairs from a CSV with a header row.

    Raises:
        MissingPath: the file does not exist
        MissingHeader: empty file or header lacks the two columns
        RowParseError: invalid UTF-8, CSV structure error or empty reference
        MrParseError: the mr field does not parse
    """
    frame, lines = _read_frame(path, (mr_column, ref_column))
    pairs = []
    for line, mr_text, rf in zip(lines, frame[mr_column], frame[ref_column]):
        if not rf.strip():
            raise RowParseError(line, "empty reference")
        pairs.append(CorpusPair(mr=_parse_row_mr(mr_text, line), mr_text=mr_text, rf=rf))
    return pairs


def load_mrs(path: PathLike, mr_column: str = "mr") -> List[MeaningRepresentation]:
    """Load the distinct MRs of a file (first-occurrence order); `ref` is optional."""
    frame, lines = _read_frame(path, (mr_column,))
    seen: Dict[str, MeaningRepresentation] = {}
    for line, mr_text in zip(lines, frame[mr_column]):
        mr = _parse_row_mr(mr_text, line)
        seen.setdefault(serialize_mr(mr), mr)
    return list(seen.values())


def group_references(pairs: Sequence[CorpusPair]) -> Dict[str, List[str]]:
    """canonical MR string -> references, in corpus order."""
    groups: Dict[str, List[str]] = {}
    for pair in pairs:
        groups.setdefault(serialize_mr(pair.mr), []).append(pair.rf)
    return groups


def pairs_to_csv_text(pairs: Sequence[CorpusPair], mr_column: str = "mr",
                      ref_column: str = "ref") -> str:
    frame = pd.DataFrame(
        {mr_column: [p.mr_text for p in pairs], ref_column: [p.rf for p in pairs]},
        columns=[mr_column, ref_column],
    )
    return frame.to_csv(index=False, lineterminator="\n")


def write_csv(pairs: Sequence[CorpusPair], path: PathLike, mr_column: str = "mr",
              ref_column: str = "ref") -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(pairs_to_csv_text(pairs, mr_column, ref_column), encoding="utf-8")


def triplets_to_csv_text(triplets: Sequence, mr_column: str = "mr",
                         ref_column: str = "ref") -> str:
    """Labeled triplets as `mr,ref,label` rows; MRs are written canonically."""
    frame = pd.DataFrame(
        {
            mr_column: [serialize_mr(t.mr) for t in triplets],
            ref_column: [t.rf for t in triplets],
            "label": [int(t.label) for t in triplets],
        },
        columns=[mr_column, ref_column, "label"],
    )
    return frame.to_csv(index=False, lineterminator="\n")
