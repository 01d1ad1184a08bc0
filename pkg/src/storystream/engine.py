"""Per-slide orchestration: ingest, encode, assign, seed, evict, report.

The engine is a single logical writer. Each slide advances the window by one
pane, scores the unassigned pool against the slide-start story snapshots,
applies assignments in descending confidence order, and seeds new stories
from the remainder. Assigned articles survive only inside pane summaries.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .cluster import (AssignmentDecision, JSD_MODE_SIMILARITY, assign_article,
                      discover_seed_stories, initial_article_theme)
from .core import Article, EncoderError, Timestamp, WindowConfig
from .embed import EmbeddingStrategy, embed_article
from .summary import PSS, StoryState, context_stats, pss_add, pss_evict, pss_theme_stats
from .theme import ContextStats, thematic_keywords
from .tokenizer import DEFAULT_STOPWORDS, article_term_counts, tokenize_article

log = logging.getLogger(__name__)


@dataclass
class PoolEntry:
    """An unassigned article: sentence vectors and term counts are retained
    until the article is assigned, seeded, or ages out of the window."""

    article: Article
    sentence_vectors: np.ndarray
    term_counts: dict[str, int]
    arrival_pane: int
    initial_repr: np.ndarray | None = None

    @property
    def id(self) -> str:
        return self.article.id

    @property
    def pane(self) -> int:
        return self.arrival_pane

    @property
    def sentence_terms(self) -> list[dict[str, int]]:
        return self.article.sentence_terms


@dataclass
class PaneWindowStats:
    """Additive per-pane article statistics for initial-theme contexts."""

    article_count: int = 0
    term_article_df: Counter = field(default_factory=Counter)


@dataclass
class EngineState:
    current_pane: int
    stories: dict[str, StoryState] = field(default_factory=dict)
    unassigned: list[PoolEntry] = field(default_factory=list)
    next_story_id: int = 0
    window_panes: dict[int, PaneWindowStats] = field(default_factory=dict)

    @classmethod
    def fresh(cls, start_pane: int) -> "EngineState":
        return cls(current_pane=start_pane - 1)

    def live_story_ids(self) -> list[str]:
        return sorted(self.stories)


@dataclass
class SlideReport:
    pane: int
    assignments: list[AssignmentDecision]
    new_stories: list[dict]
    expired_stories: list[str]
    live_story_sizes: dict[str, int]
    rejected_articles: list[str] = field(default_factory=list)
    discarded_articles: list[str] = field(default_factory=list)
    # full expiry records; serialized to the expired-story log, not to the
    # report stream
    expired_records: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "pane": self.pane,
            "assignments": [
                {"article_id": d.article_id, "chosen_story": d.chosen_story,
                 "confidence": d.confidence, "threshold": d.threshold}
                for d in self.assignments
            ],
            "new_stories": self.new_stories,
            "expired_stories": self.expired_stories,
            "live_story_sizes": self.live_story_sizes,
            "rejected_articles": self.rejected_articles,
            "discarded_articles": self.discarded_articles,
        }


def report_from_dict(data: dict) -> SlideReport:
    """Rehydrate a report parsed back from the stories.jsonl stream."""
    return SlideReport(
        pane=data["pane"],
        assignments=[AssignmentDecision(d["article_id"], d["chosen_story"],
                                        d["confidence"], d["threshold"])
                     for d in data.get("assignments", [])],
        new_stories=data.get("new_stories", []),
        expired_stories=data.get("expired_stories", []),
        live_story_sizes=data.get("live_story_sizes", {}),
        rejected_articles=data.get("rejected_articles", []),
        discarded_articles=data.get("discarded_articles", []),
    )


def _seed_for(config: WindowConfig, pane: int) -> list[int]:
    mask = (1 << 64) - 1
    return [config.rng_seed & mask, pane & mask]


def _window_context(state: EngineState) -> ContextStats:
    count = 0
    df: Counter = Counter()
    for stats in state.window_panes.values():
        count += stats.article_count
        df.update(stats.term_article_df)
    return ContextStats(corpus_count=count, term_document_frequency=dict(df))


def _refresh_theme(story: StoryState, ctx, now_pane: int, config: WindowConfig):
    stats = pss_theme_stats(story.pss, config.window_slides)
    story.cached_theme = thematic_keywords(stats, ctx, now_pane, config.keywords_n)
    story.cached_total_counts = story.pss.total_term_counts()


def _seed_new_stories(state: EngineState, remainder: list[PoolEntry],
                      config: WindowConfig, strategy: EmbeddingStrategy,
                      pane: int) -> tuple[list[dict], set[str]]:
    """Embed remainder articles under their self-themes and cluster them."""
    if not remainder:
        return [], set()
    window_ctx = _window_context(state)
    for entry in remainder:
        theme = initial_article_theme(entry.term_counts, entry.arrival_pane,
                                      window_ctx, pane, config)
        entry.initial_repr = embed_article(entry.sentence_vectors,
                                           entry.sentence_terms, theme, strategy)
    clusters = discover_seed_stories([(e.id, e.initial_repr) for e in remainder],
                                     config.min_story_size, _seed_for(config, pane))
    by_id = {e.id: e for e in remainder}
    events = []
    seeded: set[str] = set()
    for members in clusters:
        story_id = f"story-{state.next_story_id:05d}"
        state.next_story_id += 1
        entries = [by_id[m] for m in members]
        story = StoryState(
            id=story_id,
            pss=PSS(story_id),
            first_pane=min(e.arrival_pane for e in entries),
            last_updated_pane=pane,
            lifetime_article_count=len(entries),
        )
        for e in entries:
            pss_add(story.pss, e.arrival_pane, e.initial_repr, e.term_counts)
        state.stories[story_id] = story
        seeded.update(members)
        events.append({"story_id": story_id, "members": sorted(members)})
    if events:
        # creation-time themes, for reporting; refreshed again next slide
        ctx = context_stats([state.stories[sid] for sid in state.live_story_ids()])
        for event in events:
            story = state.stories[event["story_id"]]
            _refresh_theme(story, ctx, pane, config)
            event["top_keywords"] = [[t, w] for t, w in story.cached_theme.entries]
    return events, seeded


def _expiry_record(story: StoryState) -> dict:
    return {
        "story_id": story.id,
        "first_pane": story.first_pane,
        "last_pane": story.last_updated_pane,
        "article_ids_count": story.lifetime_article_count,
        "top_keywords": [[t, w] for t, w in story.cached_theme.entries],
    }


def process_slide(state: EngineState, new_articles: list[Article],
                  config: WindowConfig, encoder,
                  strategy: EmbeddingStrategy = EmbeddingStrategy.THEME_WEIGHTED,
                  jsd_mode: str = JSD_MODE_SIMILARITY,
                  stopwords: frozenset = DEFAULT_STOPWORDS) -> tuple[EngineState, SlideReport]:
    """Advance the window by one pane and process that pane's articles.

    Encoding runs before any state mutation, so an encoder failure leaves
    the state untouched.
    """
    pane = state.current_pane + 1
    for a in new_articles:
        if a.time.pane != pane:
            raise ValueError(
                f"article {a.id!r} belongs to pane {a.time.pane}, expected {pane}")

    # ---- pure phase: tokenize + encode (fallible, no state change) ----
    prepared: list[Article] = []
    rejected: list[str] = []
    for a in new_articles:
        tokenize_article(a, stopwords)
        if not a.sentences:
            log.warning("skipping article %r: no sentences with terms", a.id)
            rejected.append(a.id)
        else:
            prepared.append(a)
    sentence_counts = [len(a.sentences) for a in prepared]
    all_sentences = [s for a in prepared for s in a.sentences]
    if all_sentences:
        vectors = encoder.encode_batch(all_sentences)
        if vectors.shape[1] != config.encoder_dim:
            raise EncoderError(
                f"encoder produced dim {vectors.shape[1]}, config expects "
                f"{config.encoder_dim}")
    else:
        vectors = np.empty((0, config.encoder_dim))

    # ---- mutate phase ----
    state.current_pane = pane
    oldest_live = pane - config.window_slides + 1

    expired_records = []
    for story_id in state.live_story_ids():
        story = state.stories[story_id]
        pss_evict(story.pss, oldest_live)
        if story.pss.is_dead():
            expired_records.append(_expiry_record(story))
            del state.stories[story_id]
    discarded = [e.id for e in state.unassigned if e.arrival_pane < oldest_live]
    state.unassigned = [e for e in state.unassigned if e.arrival_pane >= oldest_live]
    for p in [p for p in state.window_panes if p < oldest_live]:
        del state.window_panes[p]

    pane_stats = PaneWindowStats()
    offset = 0
    for a, n_sent in zip(prepared, sentence_counts):
        counts = article_term_counts(a)
        pane_stats.article_count += 1
        pane_stats.term_article_df.update(counts.keys())
        state.unassigned.append(PoolEntry(
            article=a,
            sentence_vectors=vectors[offset:offset + n_sent].copy(),
            term_counts=counts,
            arrival_pane=pane,
        ))
        offset += n_sent
    state.window_panes[pane] = pane_stats

    assignments: list[AssignmentDecision] = []
    if state.stories:
        ctx = context_stats([state.stories[sid] for sid in state.live_story_ids()])
        for story_id in state.live_story_ids():
            _refresh_theme(state.stories[story_id], ctx, pane, config)
        stories = [state.stories[sid] for sid in state.live_story_ids()]
        cache: dict = {}
        decisions = [assign_article(e, stories, config, strategy, jsd_mode, cache)
                     for e in state.unassigned]
        # apply in descending confidence (scoring already used the
        # slide-start snapshot, so order affects only the report)
        order = sorted(range(len(decisions)),
                       key=lambda i: (-decisions[i].confidence, i))
        assigned_ids: set[str] = set()
        for i in order:
            decision = decisions[i]
            assignments.append(decision)
            if decision.chosen_story is None:
                continue
            entry = state.unassigned[i]
            story = state.stories[decision.chosen_story]
            frozen = embed_article(entry.sentence_vectors, entry.sentence_terms,
                                   story.cached_theme, strategy)
            pss_add(story.pss, entry.arrival_pane, frozen, entry.term_counts)
            story.last_updated_pane = pane
            story.lifetime_article_count += 1
            assigned_ids.add(entry.id)
        remainder = [e for e in state.unassigned if e.id not in assigned_ids]
    else:
        remainder = list(state.unassigned)

    new_story_events, seeded_ids = _seed_new_stories(state, remainder, config,
                                                     strategy, pane)
    placed = seeded_ids | {d.article_id for d in assignments if d.chosen_story}
    state.unassigned = [e for e in state.unassigned if e.id not in placed]

    report = SlideReport(
        pane=pane,
        assignments=assignments,
        new_stories=new_story_events,
        expired_stories=[r["story_id"] for r in expired_records],
        live_story_sizes={sid: state.stories[sid].in_window_size()
                          for sid in state.live_story_ids()},
        rejected_articles=rejected,
        discarded_articles=discarded,
        expired_records=expired_records,
    )
    return state, report


def run_stream(articles: list[Article], config: WindowConfig, encoder,
               strategy: EmbeddingStrategy = EmbeddingStrategy.THEME_WEIGHTED,
               jsd_mode: str = JSD_MODE_SIMILARITY,
               stopwords: frozenset = DEFAULT_STOPWORDS,
               on_slide=None) -> list[SlideReport]:
    """Replay a time-ordered article list pane by pane.

    Articles are re-bucketed with the configured slide duration, stably
    sorted by time (a warning is logged when the input was out of order),
    and every pane between the first and last occupied one is processed —
    empty panes still advance the window and trigger expiry.
    """
    for a in articles:
        a.time = Timestamp.from_raw(a.time.raw_time, config.slide_seconds)
    if any(articles[i].time.raw_time > articles[i + 1].time.raw_time
           for i in range(len(articles) - 1)):
        log.warning("input articles were not sorted by time; sorting")
    ordered = sorted(articles, key=lambda a: a.time.raw_time)
    if not ordered:
        return []
    by_pane: dict[int, list[Article]] = {}
    for a in ordered:
        by_pane.setdefault(a.time.pane, []).append(a)
    first, last = ordered[0].time.pane, ordered[-1].time.pane
    state = EngineState.fresh(first)
    reports = []
    for pane in range(first, last + 1):
        state, report = process_slide(state, by_pane.get(pane, []), config,
                                      encoder, strategy, jsd_mode, stopwords)
        reports.append(report)
        if on_slide is not None:
            on_slide(state, report)
    return reports
