"""Small file helpers: atomic writes and line-delimited JSON."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable


def atomic_write_bytes(path: str | os.PathLike, data: bytes) -> int:
    """Write ``data`` to ``path`` via a temp file and rename.

    Either the full content lands at ``path`` or the previous content is left
    untouched; partial output is never visible.
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, target)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    return len(data)


def atomic_write_text(path: str | os.PathLike, text: str) -> int:
    return atomic_write_bytes(path, text.encode("utf-8"))


def dump_jsonl(records: Iterable[dict[str, Any]]) -> str:
    """One JSON object per line, LF endings, UTF-8 friendly (no ASCII escapes)."""
    return "".join(json.dumps(record, ensure_ascii=False) + "\n" for record in records)


def write_jsonl(path: str | os.PathLike, records: Iterable[dict[str, Any]]) -> int:
    return atomic_write_text(path, dump_jsonl(records))


def read_jsonl(path: str | os.PathLike) -> list[dict[str, Any]]:
    out = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: invalid record: {exc}") from exc
            if not isinstance(record, dict):
                raise ValueError(f"{path}:{lineno}: expected an object, got {type(record).__name__}")
            out.append(record)
    return out
