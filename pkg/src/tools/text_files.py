"""
Async text file helpers used by the pipeline stages.

LEARNING POINTS:
- aiofiles keeps file I/O off the event loop while decodes run in threads
- Parent directories are created on write (like `mkdir -p`)
- Files are written UTF-8 with "\\n" newlines so reruns are byte-identical
"""

from pathlib import Path
from typing import Union

import aiofiles

PathLike = Union[str, Path]


async def read_text(file_path: PathLike) -> str:
    """
    Read a whole UTF-8 file.

    Raises:
        FileNotFoundError: if the file does not exist
    """
    if not file_path:
        raise ValueError("file_path is required")
    try:
        async with aiofiles.open(file_path, mode="r", encoding="utf-8") as file:
            return await file.read()
    except FileNotFoundError:
        raise FileNotFoundError(f"File not found: {file_path}")


async def write_text(file_path: PathLike, content: str) -> int:
    """
    Write content, creating parent directories; returns characters written.

    Empty content is valid (an empty output file is still an artifact).
    """
    if not file_path:
        raise ValueError("file_path is required")
    if content is None:
        raise ValueError("content is required")

    path = Path(file_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        async with aiofiles.open(path, mode="w", encoding="utf-8", newline="\n") as file:
            await file.write(content)
    except PermissionError:
        raise PermissionError(f"Permission denied writing to {file_path}")
    return len(content)


def lines_to_text(lines) -> str:
    """Join lines with a trailing newline; no lines gives an empty file."""
    return "".join(f"{line}\n" for line in lines)
