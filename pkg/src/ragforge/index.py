"""Exact top-k cosine-similarity index with a versioned binary file format."""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .fileio import atomic_write_bytes

MAGIC = b"VIDX"
FORMAT_VERSION = 1

_NORM_TOL = 1e-9


class IndexFormatError(ValueError):
    """Raised when an index file violates the on-disk format."""


class VectorIndex:
    """Append-only list of (id, unit vector) pairs with brute-force search.

    Entries keep insertion order; vectors are stored as float32. At the corpus
    sizes this serves (a few thousand chunks) exact search is both fast and
    free of approximation error.
    """

    def __init__(self, dim: int):
        if dim <= 0:
            raise ValueError(f"dim must be positive, got {dim}")
        self.dim = dim
        self._ids: list[str] = []
        self._positions: dict[str, int] = {}
        self._vectors: list[np.ndarray] = []
        self._matrix: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self._ids)

    @property
    def ids(self) -> list[str]:
        return list(self._ids)

    def vector(self, entry_id: str) -> np.ndarray:
        return self._vectors[self._positions[entry_id]].copy()

    def add(self, entry_id: str, vector: np.ndarray) -> None:
        if entry_id in self._positions:
            raise ValueError(f"duplicate entry id: {entry_id!r}")
        vec = np.asarray(vector, dtype=np.float64)
        self._check_vector(vec)
        self._positions[entry_id] = len(self._ids)
        self._ids.append(entry_id)
        self._vectors.append(vec.astype(np.float32))
        self._matrix = None

    def add_batch(self, entries) -> None:
        for entry_id, vector in entries:
            self.add(entry_id, vector)

    def _check_vector(self, vec: np.ndarray) -> None:
        if vec.shape != (self.dim,):
            raise ValueError(f"vector has shape {vec.shape}, index dim is {self.dim}")
        norm = float(np.linalg.norm(vec))
        if norm != 0.0 and abs(norm - 1.0) > 1e-6:
            raise ValueError(f"vector must be unit-norm or zero, got norm {norm!r}")

    def search(self, query: np.ndarray, k: int = 4) -> list[tuple[str, float]]:
        """Top-k entries by dot-product similarity, descending.

        Ties break toward the earlier-inserted entry; a zero query returns
        entries in insertion order with similarity 0. Returns min(k, size)
        results.
        """
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        q = np.asarray(query, dtype=np.float64)
        if q.shape != (self.dim,):
            raise ValueError(f"query has shape {q.shape}, index dim is {self.dim}")
        if not self._ids:
            return []
        if self._matrix is None:
            self._matrix = np.stack(self._vectors).astype(np.float64)
        sims = self._matrix @ q
        order = sorted(range(len(self._ids)), key=lambda i: (-sims[i], i))[:k]
        return [(self._ids[i], float(sims[i])) for i in order]

    def save(self, destination: str | Path) -> int:
        parts = [MAGIC, struct.pack("<IIQ", FORMAT_VERSION, self.dim, len(self._ids))]
        for entry_id, vec in zip(self._ids, self._vectors):
            encoded = entry_id.encode("utf-8")
            parts.append(struct.pack("<I", len(encoded)))
            parts.append(encoded)
            parts.append(vec.astype("<f4").tobytes())
        return atomic_write_bytes(destination, b"".join(parts))

    @classmethod
    def load(cls, source: str | Path) -> "VectorIndex":
        data = Path(source).read_bytes()
        reader = _Reader(data, source)
        magic = reader.take(4, "magic bytes")
        if magic != MAGIC:
            raise IndexFormatError(f"{source}: bad magic bytes {magic!r}, expected {MAGIC!r}")
        version, dim, count = struct.unpack("<IIQ", reader.take(16, "header"))
        if version != FORMAT_VERSION:
            raise IndexFormatError(f"{source}: format version {version} not supported (expected {FORMAT_VERSION})")
        index = cls(dim=dim)
        for position in range(count):
            (id_len,) = struct.unpack("<I", reader.take(4, f"entry {position} id length"))
            entry_id = reader.take(id_len, f"entry {position} id").decode("utf-8")
            raw = reader.take(4 * dim, f"entry {position} vector")
            vec = np.frombuffer(raw, dtype="<f4").copy()
            if entry_id in index._positions:
                raise IndexFormatError(f"{source}: duplicate entry id {entry_id!r}")
            index._positions[entry_id] = len(index._ids)
            index._ids.append(entry_id)
            index._vectors.append(vec)
        if reader.remaining():
            raise IndexFormatError(f"{source}: {reader.remaining()} trailing bytes after the last entry")
        return index


class _Reader:
    def __init__(self, data: bytes, source):
        self._data = data
        self._offset = 0
        self._source = source

    def take(self, n: int, what: str) -> bytes:
        if self._offset + n > len(self._data):
            raise IndexFormatError(f"{self._source}: truncated file while reading {what}")
        chunk = self._data[self._offset : self._offset + n]
        self._offset += n
        return chunk

    def remaining(self) -> int:
        return len(self._data) - self._offset
