"""Pane-based story summaries: the additive per-story triplet store.

Each live story keeps, per pane, (article count, term frequencies, sum of
frozen article representations). That triplet is sufficient to recompute
themes and story embeddings, so assigned articles can be discarded — the
single-pass guarantee.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .theme import ContextStats, CorpusThemeStats, KeywordSet


@dataclass
class PaneSummary:
    article_count: int = 0
    term_counts: Counter = field(default_factory=Counter)
    vec_sum: np.ndarray | None = None


@dataclass
class PSS:
    story_id: str
    panes: dict[int, PaneSummary] = field(default_factory=dict)

    def is_dead(self) -> bool:
        return not self.panes

    def total_articles(self) -> int:
        return sum(s.article_count for s in self.panes.values())

    def total_term_counts(self) -> Counter:
        total: Counter = Counter()
        for summary in self.panes.values():
            total.update(summary.term_counts)
        return total

    def pane_span(self) -> tuple[int, int]:
        keys = self.panes.keys()
        return min(keys), max(keys)


@dataclass
class StoryState:
    id: str
    pss: PSS
    cached_theme: KeywordSet = field(default_factory=KeywordSet)
    first_pane: int = 0
    last_updated_pane: int = 0
    lifetime_article_count: int = 0
    # refreshed once per slide alongside the theme
    cached_total_counts: Counter = field(default_factory=Counter)

    def in_window_size(self) -> int:
        return self.pss.total_articles()


def pss_add(pss: PSS, pane: int, article_repr: np.ndarray,
            article_terms: dict[str, int]) -> PSS:
    """Fold one article into its pane triplet (counts, terms, vector sum).

    Term counts are copied, never referenced, so callers may drop or reuse
    the article's buffers afterwards.
    """
    summary = pss.panes.get(pane)
    if summary is None:
        summary = PaneSummary()
        pss.panes[pane] = summary
    summary.article_count += 1
    summary.term_counts.update(article_terms)
    vec = np.asarray(article_repr, dtype=np.float64)
    if summary.vec_sum is None:
        summary.vec_sum = vec.copy()
    else:
        summary.vec_sum += vec
    return pss


def pss_evict(pss: PSS, oldest_live_pane: int) -> PSS:
    """Drop every pane older than the window; a story with no panes is dead."""
    for pane in [p for p in pss.panes if p < oldest_live_pane]:
        del pss.panes[pane]
    return pss


def pss_theme_stats(pss: PSS, window_slides: int) -> CorpusThemeStats:
    """Expose the per-pane term counts for theme ranking (views, not copies)."""
    if pss.is_dead():
        raise ValueError(f"story {pss.story_id!r} has an empty summary")
    return CorpusThemeStats(
        per_pane_term_counts={p: s.term_counts for p, s in pss.panes.items()},
        decay_factor=float(window_slides),
    )


def context_stats(stories: list[StoryState]) -> ContextStats:
    """Story-level document frequencies over the in-window vocabulary."""
    df: Counter = Counter()
    for story in stories:
        seen: set[str] = set()
        for summary in story.pss.panes.values():
            seen.update(summary.term_counts.keys())
        df.update(seen)
    return ContextStats(corpus_count=len(stories), term_document_frequency=dict(df))
