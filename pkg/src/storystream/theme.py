"""Temporal theme identification.

A corpus's theme is the top-N terms ranked by recency-weighted popularity
times distinctiveness against sibling corpora. All time arithmetic is in
integer pane units; pane iteration is sorted so results are bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import Timestamp


def _pane_of(now) -> int:
    if isinstance(now, Timestamp):
        return now.pane
    return int(now)


@dataclass
class KeywordSet:
    """Ranked (term, weight) pairs describing a temporal theme."""

    entries: list[tuple[str, float]] = field(default_factory=list)
    computed_at: int | None = None

    def terms(self) -> list[str]:
        return [t for t, _ in self.entries]

    def weight_map(self) -> dict[str, float]:
        return dict(self.entries)

    def __len__(self):
        return len(self.entries)


@dataclass
class CorpusThemeStats:
    """Per-pane term counts of one target corpus plus its decay factor."""

    per_pane_term_counts: dict[int, dict[str, int]]
    decay_factor: float


@dataclass
class ContextStats:
    """How many corpora exist and how many contain each term."""

    corpus_count: int
    term_document_frequency: dict[str, int]


def rec_pop(term: str, stats: CorpusThemeStats, now) -> float:
    """Time-decayed frequency of a term: sum over panes of exp(-age/delta) * count."""
    if stats.decay_factor <= 0:
        raise ValueError("decay_factor must be positive")
    now_pane = _pane_of(now)
    total = 0.0
    for pane in sorted(stats.per_pane_term_counts):
        count = stats.per_pane_term_counts[pane].get(term, 0)
        if count:
            total += math.exp(-abs(pane - now_pane) / stats.decay_factor) * count
    return total


def dist(term: str, context: ContextStats) -> float:
    """Inverse corpus frequency: ln((|D|+1)/(df+1) + 1)."""
    if context.corpus_count < 1:
        raise ValueError("context must contain at least one corpus")
    df = context.term_document_frequency.get(term, 0)
    return math.log((context.corpus_count + 1) / (df + 1) + 1)


def thematic_keywords(target: CorpusThemeStats, context: ContextStats,
                      now, n: int) -> KeywordSet:
    """Top-n terms of the target by rec_pop * dist.

    Ties break lexicographically; fewer than n entries are returned when the
    vocabulary is smaller. An empty vocabulary yields an empty set.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    now_pane = _pane_of(now)
    recpop: dict[str, float] = {}
    for pane in sorted(target.per_pane_term_counts):
        decay = math.exp(-abs(pane - now_pane) / target.decay_factor)
        for term, count in target.per_pane_term_counts[pane].items():
            recpop[term] = recpop.get(term, 0.0) + decay * count
    if not recpop:
        return KeywordSet(entries=[], computed_at=now_pane)
    weighted = [(term, rp * dist(term, context)) for term, rp in recpop.items()]
    weighted.sort(key=lambda e: (-e[1], e[0]))
    return KeywordSet(entries=weighted[:n], computed_at=now_pane)


def keyword_distribution(term_counts: dict[str, int], keywords: KeywordSet) -> np.ndarray:
    """Probability of each theme keyword, proportional to its raw count.

    Returns the all-zero marker when no keyword occurs in the counts: the
    caller treats that as "no shared symbolic theme".
    """
    if not keywords.entries:
        raise ValueError("keyword set is empty")
    counts = np.array([term_counts.get(t, 0) for t, _ in keywords.entries],
                      dtype=np.float64)
    total = counts.sum()
    if total == 0:
        return np.zeros(len(counts), dtype=np.float64)
    return counts / total
