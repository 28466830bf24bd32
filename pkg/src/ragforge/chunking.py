"""Whitespace tokenization and sliding-window chunking of documents."""

from __future__ import annotations

import re
from dataclasses import dataclass

_TOKEN_RE = re.compile(r"\S+")


@dataclass(frozen=True)
class Chunk:
    """A token window of one document.

    ``token_start``/``token_end`` are token offsets (end exclusive); ``text``
    is the character slice of the source document covering those tokens,
    including any whitespace between them.
    """

    doc_id: str
    seq: int
    token_start: int
    token_end: int
    text: str


def tokenize(text: str) -> list[tuple[int, int]]:
    """Split ``text`` into maximal runs of non-whitespace characters.

    Returns (start, end) character offsets into the input, end exclusive.
    """
    return [m.span() for m in _TOKEN_RE.finditer(text)]


def tokens(text: str) -> list[str]:
    """The token strings of ``text``, in order."""
    return _TOKEN_RE.findall(text)


def chunk_count(token_total: int, chunk_size: int, overlap: int) -> int:
    """Closed-form number of windows covering ``token_total`` tokens."""
    _check_window(chunk_size, overlap)
    if token_total == 0:
        return 0
    if token_total <= chunk_size:
        return 1
    stride = chunk_size - overlap
    return 1 + -(-(token_total - chunk_size) // stride)


def chunk(doc, chunk_size: int = 1000, overlap: int = 50) -> list[Chunk]:
    """Chunk a document (anything with ``doc_id`` and ``text``) into windows.

    Windows start at multiples of ``chunk_size - overlap``; the last window is
    truncated at the end of the document, so every token lands in at least one
    chunk and consecutive chunks share exactly ``overlap`` tokens except
    possibly the last.
    """
    return chunk_text(doc.doc_id, doc.text, chunk_size=chunk_size, overlap=overlap)


def chunk_text(doc_id: str, text: str, chunk_size: int = 1000, overlap: int = 50) -> list[Chunk]:
    _check_window(chunk_size, overlap)
    spans = tokenize(text)
    total = len(spans)
    n = chunk_count(total, chunk_size, overlap)
    stride = chunk_size - overlap
    chunks = []
    for seq in range(n):
        start = seq * stride
        end = min(start + chunk_size, total)
        chunks.append(
            Chunk(
                doc_id=doc_id,
                seq=seq,
                token_start=start,
                token_end=end,
                text=text[spans[start][0] : spans[end - 1][1]],
            )
        )
    return chunks


def _check_window(chunk_size: int, overlap: int) -> None:
    if chunk_size <= 0:
        raise ValueError(f"chunk_size must be positive, got {chunk_size}")
    if not 0 <= overlap < chunk_size:
        raise ValueError(f"overlap must satisfy 0 <= overlap < chunk_size, got overlap={overlap} chunk_size={chunk_size}")
