"""Token embedding providers for the embedding-similarity score."""
from __future__ import annotations

import hashlib
import threading
from typing import Protocol, Sequence

import httpx
import numpy as np


class Embedder(Protocol):
    """Maps a token sequence to one vector per token, fixed dimension."""

    def embed(self, tokens: Sequence[str]) -> np.ndarray: ...


class MockEmbedder:
    """Deterministic hash-derived vectors; identical tokens embed identically.

    Components are strictly positive so cosine similarities stay in [0, 1].
    """

    def __init__(self, dim: int = 16, seed: str = "smartdoc"):
        self.dim = dim
        self.seed = seed

    def _vector(self, token: str) -> np.ndarray:
        material = b""
        counter = 0
        needed = self.dim * 2
        while len(material) < needed:
            material += hashlib.sha256(
                f"{self.seed}:{counter}:{token}".encode("utf-8")
            ).digest()
            counter += 1
        pairs = np.frombuffer(material[:needed], dtype=np.uint8).reshape(-1, 2)
        values = pairs[:, 0].astype(np.float64) * 256 + pairs[:, 1].astype(np.float64)
        return (values + 1.0) / 65537.0

    def embed(self, tokens: Sequence[str]) -> np.ndarray:
        if not tokens:
            return np.zeros((0, self.dim))
        return np.stack([self._vector(t) for t in tokens])


class TableEmbedder:
    """Explicit token -> vector table, mainly for tests with hand-built vectors."""

    def __init__(self, table: dict[str, Sequence[float]]):
        self.table = {k: np.asarray(v, dtype=np.float64) for k, v in table.items()}

    def embed(self, tokens: Sequence[str]) -> np.ndarray:
        if not tokens:
            return np.zeros((0, 0))
        return np.stack([self.table[t] for t in tokens])


class HttpEmbedder:
    """Embeddings over an OpenAI-compatible HTTP endpoint.

    POST {model, input: [tokens]} -> {data: [{embedding: [...]}, ...]}.
    Per-token results are memoized for the lifetime of the embedder.
    """

    def __init__(self, endpoint: str, model: str, api_key: str = "",
                 timeout: float = 60.0):
        self.endpoint = endpoint
        self.model = model
        self.api_key = api_key
        self.timeout = timeout
        self._cache: dict[str, np.ndarray] = {}
        self._lock = threading.Lock()

    def _fetch(self, tokens: list[str]) -> list[np.ndarray]:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        resp = httpx.post(
            self.endpoint,
            json={"model": self.model, "input": tokens},
            headers=headers,
            timeout=self.timeout,
        )
        resp.raise_for_status()
        data = resp.json()["data"]
        return [np.asarray(item["embedding"], dtype=np.float64) for item in data]

    def embed(self, tokens: Sequence[str]) -> np.ndarray:
        with self._lock:
            missing = sorted({t for t in tokens if t not in self._cache})
        if missing:
            vectors = self._fetch(missing)
            with self._lock:
                self._cache.update(zip(missing, vectors))
        with self._lock:
            rows = [self._cache[t] for t in tokens]
        return np.stack(rows) if rows else np.zeros((0, 0))
