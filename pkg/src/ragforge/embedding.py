"""Embedding providers: a deterministic local feature-hashing embedder and an
HTTP-backed remote provider.

Vectors are unit-norm float64 arrays (or the zero vector for empty text), so
cosine similarity reduces to a dot product downstream.
"""

from __future__ import annotations

import hashlib
import os
import threading
from typing import Iterable, Protocol, Sequence

import numpy as np

from .chunking import tokens

EMBED_URL_ENV = "RAGFORGE_EMBED_URL"
EMBED_KEY_ENV = "RAGFORGE_EMBED_KEY"


class EmbeddingProvider(Protocol):
    name: str
    dim: int

    def embed(self, texts: Sequence[str]) -> list[np.ndarray]: ...


def _token_signature(token: str) -> int:
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def hash_bucket(token: str, dim: int) -> tuple[int, float]:
    """Deterministic (bucket, sign) assignment for a token."""
    signature = _token_signature(token)
    bucket = signature % dim
    sign = 1.0 if (signature >> 63) & 1 == 0 else -1.0
    return bucket, sign


def local_embed(text: str, dim: int = 256) -> np.ndarray:
    """Signed feature hashing of the token bag into ``dim`` buckets, L2 normalized.

    Stable across processes and platforms; empty text maps to the zero vector.
    """
    vec = np.zeros(dim, dtype=np.float64)
    for token in tokens(text):
        bucket, sign = hash_bucket(token, dim)
        vec[bucket] += sign
    return normalize(vec)


def normalize(vec: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        return vec
    return vec / norm


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity; zero vectors score 0 against anything."""
    na, nb = float(np.linalg.norm(a)), float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


class LocalHashEmbedder:
    """Offline embedding provider built on :func:`local_embed`."""

    def __init__(self, dim: int = 256):
        if dim <= 0:
            raise ValueError(f"dim must be positive, got {dim}")
        self.dim = dim
        self.name = f"local-hash-{dim}"

    def embed(self, texts: Sequence[str]) -> list[np.ndarray]:
        return [local_embed(text, self.dim) for text in texts]


class RemoteEmbedder:
    """Embedding provider backed by an HTTP endpoint.

    Endpoint and credentials come from the environment (RAGFORGE_EMBED_URL,
    RAGFORGE_EMBED_KEY); a bounded semaphore caps in-flight requests.
    """

    def __init__(
        self,
        model: str,
        dim: int,
        url: str | None = None,
        api_key: str | None = None,
        max_in_flight: int = 4,
        transport=None,
        timeout: float = 30.0,
    ):
        import httpx

        self.name = f"remote-{model}"
        self.model = model
        self.dim = dim
        self.url = url or os.environ.get(EMBED_URL_ENV)
        if not self.url:
            raise ValueError(f"remote embedder needs an endpoint URL ({EMBED_URL_ENV})")
        key = api_key if api_key is not None else os.environ.get(EMBED_KEY_ENV, "")
        headers = {"Authorization": f"Bearer {key}"} if key else {}
        self._client = httpx.Client(headers=headers, timeout=timeout, transport=transport)
        self._gate = threading.BoundedSemaphore(max_in_flight)

    def embed(self, texts: Sequence[str]) -> list[np.ndarray]:
        with self._gate:
            response = self._client.post(self.url, json={"model": self.model, "input": list(texts)})
        response.raise_for_status()
        payload = response.json()
        rows = payload["data"]
        if len(rows) != len(texts):
            raise ValueError(f"embedding endpoint returned {len(rows)} vectors for {len(texts)} inputs")
        out = []
        for row in rows:
            vec = np.asarray(row["embedding"], dtype=np.float64)
            if vec.shape != (self.dim,):
                raise ValueError(f"embedding endpoint returned dim {vec.shape}, expected ({self.dim},)")
            out.append(normalize(vec))
        return out

    def close(self) -> None:
        self._client.close()


def embed_in_batches(provider: EmbeddingProvider, texts: Iterable[str], batch_size: int = 64) -> list[np.ndarray]:
    vectors: list[np.ndarray] = []
    batch: list[str] = []
    for text in texts:
        batch.append(text)
        if len(batch) == batch_size:
            vectors.extend(provider.embed(batch))
            batch = []
    if batch:
        vectors.extend(provider.embed(batch))
    return vectors
