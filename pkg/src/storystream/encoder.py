"""Sentence encoders: a deterministic hashed reference encoder and an HTTP
client for an external embedding bridge.

Both present the same facade: ``encode_batch`` maps a list of sentences to a
(n, dim) float array of unit-norm rows, preserving input order.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np
import requests

from .core import EncoderError
from .tokenizer import DEFAULT_STOPWORDS, content_tokens

_UNIT_NORM_TOL = 1e-6


@dataclass
class EncoderSpec:
    kind: str = "hashed"  # "hashed" | "bridge"
    dim: int = 256
    seed: int = 42
    endpoint: str | None = None
    batch_size: int = 64
    timeout: float = 10.0
    retries: int = 2

    def __post_init__(self):
        if self.kind not in ("hashed", "bridge"):
            raise ValueError(f"unknown encoder kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError("encoder dim must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.kind == "bridge" and not self.endpoint:
            raise ValueError("bridge encoder requires an endpoint")


# (seed, token) -> 64-bit hash. Tokens repeat heavily within a stream, so
# memoizing the digest dominates hashed-encoding speed.
_digest_cache: dict[tuple[int, str], int] = {}


def _digest64(seed: int, token: str) -> int:
    key = (seed, token)
    h = _digest_cache.get(key)
    if h is None:
        # blake2b-512 truncated to 8 bytes: stable across platforms and
        # reproducible from other languages without keyed-hash support.
        digest = hashlib.blake2b(f"{seed}|{token}".encode("utf-8")).digest()
        h = int.from_bytes(digest[:8], "little")
        _digest_cache[key] = h
    return h


def hashed_encode(sentence: str, dim: int, seed: int,
                  stopwords: frozenset = DEFAULT_STOPWORDS) -> np.ndarray:
    """Feature-hash a sentence's content tokens into a unit vector.

    Each token occurrence adds ±1 (sign from a seeded 64-bit hash) to one of
    ``dim`` buckets; the result is L2-normalized, so the embedding depends
    only on the token multiset.
    """
    tokens = content_tokens(sentence, stopwords)
    if not tokens:
        raise ValueError(f"sentence has no surviving tokens: {sentence!r}")
    vec = np.zeros(dim, dtype=np.float64)
    for tok in tokens:
        h = _digest64(seed, tok)
        idx = (h & 0xFFFFFFFF) % dim
        sign = 1.0 if (h >> 63) & 1 else -1.0
        vec[idx] += sign
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        # Opposite-sign bucket collisions cancelled everything; fall back to
        # a deterministic single-bucket vector so the unit-norm contract holds.
        idx = min((_digest64(seed, t) & 0xFFFFFFFF) % dim for t in tokens)
        vec[idx] = 1.0
        norm = 1.0
    return vec / norm


class HashedEncoder:
    """Deterministic stand-in for a pretrained sentence encoder."""

    kind = "hashed"

    def __init__(self, dim: int = 256, seed: int = 42,
                 stopwords: frozenset = DEFAULT_STOPWORDS):
        self.dim = dim
        self.seed = seed
        self.stopwords = stopwords

    def encode_batch(self, sentences: list[str]) -> np.ndarray:
        _check_nonempty(sentences)
        out = np.empty((len(sentences), self.dim), dtype=np.float64)
        for i, s in enumerate(sentences):
            out[i] = hashed_encode(s, self.dim, self.seed, self.stopwords)
        return out


class BridgeEncoder:
    """Client for the embedding bridge wire protocol.

    ``POST {endpoint}/embed`` with ``{"sentences": [...]}`` returns
    ``{"dim": d, "vectors": [[...], ...]}``; ``GET {endpoint}/healthz``
    reports the model name and dimension. A dimension mismatch at startup is
    fatal: partial or wrong-shaped embeddings would corrupt summary sums
    irrecoverably in a single-pass run.
    """

    kind = "bridge"

    def __init__(self, endpoint: str, dim: int, batch_size: int = 64,
                 timeout: float = 10.0, retries: int = 2):
        self.endpoint = endpoint.rstrip("/")
        self.dim = dim
        self.batch_size = batch_size
        self.timeout = timeout
        self.retries = retries
        self._check_health()

    def _check_health(self):
        url = f"{self.endpoint}/healthz"
        try:
            resp = requests.get(url, timeout=self.timeout)
            resp.raise_for_status()
            info = resp.json()
        except Exception as exc:
            raise EncoderError(f"bridge health check failed at {url}: {exc}") from exc
        got = info.get("dim")
        if got != self.dim:
            raise EncoderError(
                f"bridge at {self.endpoint} serves dim {got}, expected {self.dim}")
        self.model = info.get("model", "unknown")

    def _post_chunk(self, chunk: list[str]) -> np.ndarray:
        url = f"{self.endpoint}/embed"
        last_exc = None
        for _ in range(self.retries + 1):
            try:
                resp = requests.post(url, json={"sentences": chunk}, timeout=self.timeout)
                resp.raise_for_status()
                body = resp.json()
                break
            except Exception as exc:
                last_exc = exc
        else:
            raise EncoderError(f"bridge embed failed at {url}: {last_exc}") from last_exc
        if body.get("dim") != self.dim:
            raise EncoderError(
                f"bridge at {self.endpoint} returned dim {body.get('dim')}, expected {self.dim}")
        vectors = np.asarray(body["vectors"], dtype=np.float64)
        if vectors.shape != (len(chunk), self.dim):
            raise EncoderError(
                f"bridge at {self.endpoint} returned shape {vectors.shape}, "
                f"expected {(len(chunk), self.dim)}")
        norms = np.linalg.norm(vectors, axis=1)
        bad = np.where(np.abs(norms - 1.0) > _UNIT_NORM_TOL)[0]
        if bad.size:
            raise EncoderError(
                f"bridge at {self.endpoint} returned non-unit vector at index {bad[0]} "
                f"(norm={norms[bad[0]]:.8f})")
        return vectors

    def encode_batch(self, sentences: list[str]) -> np.ndarray:
        _check_nonempty(sentences)
        chunks = [sentences[i:i + self.batch_size]
                  for i in range(0, len(sentences), self.batch_size)]
        if not chunks:
            return np.empty((0, self.dim), dtype=np.float64)
        return np.concatenate([self._post_chunk(c) for c in chunks], axis=0)


def _check_nonempty(sentences: list[str]):
    for i, s in enumerate(sentences):
        if not s or not s.strip():
            raise ValueError(f"sentence at index {i} is empty")


def make_encoder(spec: EncoderSpec, stopwords: frozenset = DEFAULT_STOPWORDS):
    if spec.kind == "hashed":
        return HashedEncoder(spec.dim, spec.seed, stopwords)
    return BridgeEncoder(spec.endpoint, spec.dim, spec.batch_size,
                         spec.timeout, spec.retries)


def encode_batch(sentences: list[str], spec: EncoderSpec) -> np.ndarray:
    """One-shot convenience wrapper over :func:`make_encoder`."""
    return make_encoder(spec).encode_batch(sentences)
