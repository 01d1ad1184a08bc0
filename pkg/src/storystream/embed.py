"""Theme-aware article embedding and time-aware story embedding.

Articles pool their sentence vectors weighted by theme relevance; stories
pool frozen member representations weighted by time relevance. Both outputs
are convex combinations, so their norms never exceed the inputs'.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np

from .core import Timestamp
from .theme import KeywordSet


class EmbeddingStrategy(str, Enum):
    THEME_WEIGHTED = "theme_weighted"   # default: sentences weighted by keyword mass
    UNIFORM_MEAN = "uniform_mean"       # plain mean of sentence vectors


def _as_matrix(sentence_vectors) -> np.ndarray:
    mat = np.asarray(sentence_vectors, dtype=np.float64)
    if mat.ndim != 2:
        raise ValueError("sentence vectors must share one dimension")
    return mat


def embed_article(sentence_vectors, sentence_terms: list[dict[str, int]],
                  keywords: KeywordSet,
                  strategy: EmbeddingStrategy = EmbeddingStrategy.THEME_WEIGHTED) -> np.ndarray:
    """Pool sentence vectors into one article representation.

    Under THEME_WEIGHTED each sentence gets weight proportional to its
    keyword mass (sum of keyword count * keyword weight); articles containing
    no theme keyword fall back to uniform pooling so they remain scorable.
    """
    mat = _as_matrix(sentence_vectors)
    n = mat.shape[0]
    if n == 0 or len(sentence_terms) != n:
        raise ValueError("need equally many sentence vectors and term counts")
    weights = None
    if strategy == EmbeddingStrategy.THEME_WEIGHTED and keywords.entries:
        masses = np.zeros(n, dtype=np.float64)
        for l, counts in enumerate(sentence_terms):
            m = 0.0
            for term, w in keywords.entries:
                c = counts.get(term, 0)
                if c:
                    m += c * w
            masses[l] = m
        total = masses.sum()
        if total > 0:
            weights = masses / total
    if weights is None:
        weights = np.full(n, 1.0 / n, dtype=np.float64)
    out = weights @ mat
    if not np.all(np.isfinite(out)):
        raise ValueError("article embedding produced non-finite components")
    return out


def _delta_c(panes: list[int]) -> float:
    # The story's time span in panes; floor of 1 keeps single-pane stories
    # well-defined (all weights equal there regardless of the factor).
    return float(max(max(panes) - min(panes), 1))


def embed_story(pss, target_time) -> np.ndarray:
    """Time-decayed mean of a story's frozen member representations.

    Computed from the pane summaries alone: sum of decayed per-pane vector
    sums over the decayed article count. Decays are shifted by the minimum
    pane distance, which cancels in the ratio but keeps it well-conditioned.
    """
    panes = sorted(p for p, s in pss.panes.items() if s.article_count > 0)
    if not panes:
        raise ValueError(f"story {pss.story_id!r} has no articles in window")
    target_pane = target_time.pane if isinstance(target_time, Timestamp) else int(target_time)
    delta = _delta_c(panes)
    dmin = min(abs(p - target_pane) for p in panes)
    num = None
    den = 0.0
    for p in panes:
        summary = pss.panes[p]
        decay = math.exp(-(abs(p - target_pane) - dmin) / delta)
        contrib = decay * summary.vec_sum
        num = contrib if num is None else num + contrib
        den += decay * summary.article_count
    out = num / den
    if not np.all(np.isfinite(out)):
        raise ValueError("story embedding produced non-finite components")
    return out


def embed_story_oracle(articles: list[tuple[np.ndarray, int]], target_time) -> np.ndarray:
    """Reference per-article form of the story embedding (test oracle).

    Weights every member representation by exp(-|t_a - t_i|/delta) directly,
    normalized over members.
    """
    if not articles:
        raise ValueError("empty story")
    target_pane = target_time.pane if isinstance(target_time, Timestamp) else int(target_time)
    panes = [p for _, p in articles]
    delta = _delta_c(panes)
    raw = [math.exp(-abs(p - target_pane) / delta) for p in panes]
    total = sum(raw)
    out = np.zeros_like(np.asarray(articles[0][0], dtype=np.float64))
    for (vec, _), w in zip(articles, raw):
        out = out + (w / total) * np.asarray(vec, dtype=np.float64)
    return out
