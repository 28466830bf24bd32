"""Chunk-level retrieval over a vector index, with parent-document dedup."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .chunking import Chunk, chunk
from .corpus import RawDocument, load_documents
from .embedding import EmbeddingProvider, embed_in_batches
from .index import VectorIndex

CHUNK_ID_SEPARATOR = "#"


def chunk_id(piece: Chunk) -> str:
    return f"{piece.doc_id}{CHUNK_ID_SEPARATOR}{piece.seq}"


def parent_doc_id(entry_id: str) -> str:
    return entry_id.rsplit(CHUNK_ID_SEPARATOR, 1)[0]


@dataclass(frozen=True)
class RetrievedChunk:
    chunk_id: str
    doc_id: str
    seq: int
    text: str
    similarity: float


def chunk_corpus(docs: Sequence[RawDocument], chunk_size: int = 1000, overlap: int = 50) -> list[Chunk]:
    pieces: list[Chunk] = []
    for doc in docs:
        pieces.extend(chunk(doc, chunk_size=chunk_size, overlap=overlap))
    return pieces


def build_index(
    docs: Sequence[RawDocument],
    embedder: EmbeddingProvider,
    chunk_size: int = 1000,
    overlap: int = 50,
) -> VectorIndex:
    """Chunk the corpus and index one embedding per chunk."""
    pieces = chunk_corpus(docs, chunk_size=chunk_size, overlap=overlap)
    index = VectorIndex(dim=embedder.dim)
    vectors = embed_in_batches(embedder, (piece.text for piece in pieces))
    index.add_batch((chunk_id(piece), vector) for piece, vector in zip(pieces, vectors))
    return index


class Retriever:
    """Maps query text to the top-k chunks of an indexed corpus."""

    def __init__(
        self,
        index: VectorIndex,
        chunks: Sequence[Chunk],
        embedder: EmbeddingProvider,
    ):
        if embedder.dim != index.dim:
            raise ValueError(f"embedder dim {embedder.dim} does not match index dim {index.dim}")
        self._index = index
        self._embedder = embedder
        self._chunks = {chunk_id(piece): piece for piece in chunks}
        missing = [entry for entry in index.ids if entry not in self._chunks]
        if missing:
            raise ValueError(f"index entries without chunk text: {missing[:3]}{'...' if len(missing) > 3 else ''}")

    @classmethod
    def from_corpus(
        cls,
        docs: Sequence[RawDocument],
        embedder: EmbeddingProvider,
        index: VectorIndex | None = None,
        chunk_size: int = 1000,
        overlap: int = 50,
    ) -> "Retriever":
        pieces = chunk_corpus(docs, chunk_size=chunk_size, overlap=overlap)
        if index is None:
            index = VectorIndex(dim=embedder.dim)
            vectors = embed_in_batches(embedder, (piece.text for piece in pieces))
            index.add_batch((chunk_id(piece), vector) for piece, vector in zip(pieces, vectors))
        return cls(index=index, chunks=pieces, embedder=embedder)

    @classmethod
    def from_files(
        cls,
        corpus_path: str | Path,
        index_path: str | Path,
        embedder: EmbeddingProvider,
        chunk_size: int = 1000,
        overlap: int = 50,
    ) -> "Retriever":
        docs = load_documents(corpus_path)
        index = VectorIndex.load(index_path)
        return cls.from_corpus(docs, embedder, index=index, chunk_size=chunk_size, overlap=overlap)

    def __len__(self) -> int:
        return len(self._index)

    def search(self, query: str, k: int = 4) -> list[RetrievedChunk]:
        [vector] = self._embedder.embed([query])
        hits = self._index.search(vector, k=k)
        out = []
        for entry_id, similarity in hits:
            piece = self._chunks[entry_id]
            out.append(
                RetrievedChunk(
                    chunk_id=entry_id,
                    doc_id=piece.doc_id,
                    seq=piece.seq,
                    text=piece.text,
                    similarity=similarity,
                )
            )
        return out


def dedup_doc_ids(chunks: Sequence[RetrievedChunk]) -> list[str]:
    """Parent document ids of the chunks, first occurrence order."""
    seen: set[str] = set()
    out: list[str] = []
    for piece in chunks:
        if piece.doc_id not in seen:
            seen.add(piece.doc_id)
            out.append(piece.doc_id)
    return out
