"""scikit-learn style facade over the streaming engine.

``StoryDiscovery`` exposes fit/partial_fit/fit_predict/predict and inherits
``get_params``/``set_params`` from ``BaseEstimator``, so runs compose with
the usual model-selection and metric tooling.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .cluster import assign_article
from .core import Article, WindowConfig
from .embed import EmbeddingStrategy
from .encoder import EncoderSpec, make_encoder
from .engine import EngineState, PoolEntry, process_slide
from .io import article_from_record
from .tokenizer import article_term_counts, tokenize_article

UNASSIGNED = -1


class StoryDiscovery(BaseEstimator):
    """Online story discovery as a clustering estimator.

    ``fit`` replays a full stream; ``partial_fit`` appends later panes to a
    running state. ``labels_`` holds one integer story index per seen
    article (creation order), with -1 for articles never placed in a story.
    """

    def __init__(self, window_slides=7, slide_seconds=86400.0, min_story_size=8,
                 keywords_n=10, temperature=2.0, encoder_dim=256, rng_seed=42,
                 encoder="hashed", endpoint=None, batch_size=64,
                 strategy="theme_weighted", jsd_mode="similarity"):
        self.window_slides = window_slides
        self.slide_seconds = slide_seconds
        self.min_story_size = min_story_size
        self.keywords_n = keywords_n
        self.temperature = temperature
        self.encoder_dim = encoder_dim
        self.rng_seed = rng_seed
        self.encoder = encoder
        self.endpoint = endpoint
        self.batch_size = batch_size
        self.strategy = strategy
        self.jsd_mode = jsd_mode

    # -- wiring -----------------------------------------------------------
    def _config(self) -> WindowConfig:
        return WindowConfig(
            window_slides=self.window_slides, slide_seconds=self.slide_seconds,
            min_story_size=self.min_story_size, keywords_n=self.keywords_n,
            temperature=self.temperature, encoder_dim=self.encoder_dim,
            rng_seed=self.rng_seed)

    def _as_articles(self, X) -> list[Article]:
        articles = []
        for i, item in enumerate(X):
            if isinstance(item, Article):
                articles.append(item)
            elif isinstance(item, dict):
                articles.append(article_from_record(item, self.slide_seconds,
                                                    f"X[{i}]"))
            else:
                raise TypeError(f"X[{i}]: expected dict or Article, "
                                f"got {type(item).__name__}")
        return articles

    def _ensure_engine(self, start_pane: int):
        if not hasattr(self, "state_"):
            self.config_ = self._config()
            spec = EncoderSpec(kind=self.encoder, dim=self.encoder_dim,
                               seed=self.rng_seed, endpoint=self.endpoint,
                               batch_size=self.batch_size)
            self.encoder_ = make_encoder(spec)
            self.state_ = EngineState.fresh(start_pane)
            self.reports_ = []
            self.seen_ids_ = []
            self.assignment_map_ = {}

    # -- estimator API ----------------------------------------------------
    def partial_fit(self, X, y=None):
        """Process the panes covered by X, which must not precede the state."""
        articles = self._as_articles(X)
        if not articles:
            return self
        articles.sort(key=lambda a: a.time.raw_time)
        first = articles[0].time.pane
        self._ensure_engine(first)
        if first <= self.state_.current_pane:
            raise ValueError(
                f"articles start at pane {first}, but pane "
                f"{self.state_.current_pane} was already processed")
        by_pane: dict[int, list[Article]] = {}
        for a in articles:
            by_pane.setdefault(a.time.pane, []).append(a)
            self.seen_ids_.append(a.id)
        strategy = EmbeddingStrategy(self.strategy)
        for pane in range(self.state_.current_pane + 1,
                          articles[-1].time.pane + 1):
            _, report = process_slide(self.state_, by_pane.get(pane, []),
                                      self.config_, self.encoder_,
                                      strategy=strategy, jsd_mode=self.jsd_mode)
            self.reports_.append(report)
            for decision in report.assignments:
                if decision.chosen_story is not None:
                    self.assignment_map_[decision.article_id] = decision.chosen_story
            for event in report.new_stories:
                for member in event["members"]:
                    self.assignment_map_[member] = event["story_id"]
        self._refresh_labels()
        return self

    def fit(self, X, y=None):
        for attr in ("state_", "reports_", "seen_ids_", "assignment_map_",
                     "config_", "encoder_", "labels_", "story_ids_"):
            if hasattr(self, attr):
                delattr(self, attr)
        return self.partial_fit(X)

    def fit_predict(self, X, y=None) -> np.ndarray:
        return self.fit(X).labels_

    def predict(self, X) -> np.ndarray:
        """Score new articles against the current stories without mutating state.

        Returns story indices (see ``story_ids_``) or -1 per article.
        """
        if not hasattr(self, "state_"):
            raise RuntimeError("predict() before fit()")
        articles = self._as_articles(X)
        stories = [self.state_.stories[sid]
                   for sid in sorted(self.state_.stories)]
        index = {sid: i for i, sid in enumerate(self.story_ids_)}
        out = np.full(len(articles), UNASSIGNED, dtype=np.int64)
        if not stories:
            return out
        cache: dict = {}
        for i, article in enumerate(articles):
            tokenize_article(article)
            if not article.sentences:
                continue
            vectors = self.encoder_.encode_batch(article.sentences)
            entry = PoolEntry(article=article, sentence_vectors=vectors,
                              term_counts=article_term_counts(article),
                              arrival_pane=article.time.pane)
            decision = assign_article(entry, stories, self.config_,
                                      EmbeddingStrategy(self.strategy),
                                      self.jsd_mode, cache)
            if decision.chosen_story is not None:
                out[i] = index[decision.chosen_story]
        return out

    def _refresh_labels(self):
        story_ids = sorted({s for s in self.assignment_map_.values()})
        index = {sid: i for i, sid in enumerate(story_ids)}
        self.story_ids_ = story_ids
        self.labels_ = np.array(
            [index.get(self.assignment_map_.get(aid), UNASSIGNED)
             for aid in self.seen_ids_], dtype=np.int64)
