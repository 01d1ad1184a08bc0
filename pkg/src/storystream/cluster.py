"""Similarity, confidence-based assignment, and novel-story seeding."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import WindowConfig
from .embed import EmbeddingStrategy, embed_article, embed_story
from .theme import ContextStats, CorpusThemeStats, KeywordSet, keyword_distribution, thematic_keywords
from .summary import StoryState

JSD_MODE_SIMILARITY = "similarity"
JSD_MODE_DIVERGENCE = "divergence"


@dataclass
class SimilarityBreakdown:
    cosine_part: float
    keyword_part: float
    thematic: float


@dataclass
class AssignmentDecision:
    article_id: str
    chosen_story: str | None
    confidence: float
    threshold: float


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def jensen_shannon(p: np.ndarray, q: np.ndarray) -> float:
    """Base-2 Jensen-Shannon divergence, in [0, 1].

    Exactly 0 for identical distributions and exactly 1 for disjoint
    supports (each kept term contributes p*log2(2) there).
    """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise ValueError("distributions must have equal length")
    m = 0.5 * (p + q)

    def half_kl(a):
        mask = a > 0
        return float(np.sum(a[mask] * np.log2(a[mask] / m[mask])))

    return 0.5 * half_kl(p) + 0.5 * half_kl(q)


def thematic_similarity(article_repr: np.ndarray, story_repr: np.ndarray,
                        article_dist: np.ndarray, story_dist: np.ndarray,
                        jsd_mode: str = JSD_MODE_SIMILARITY) -> SimilarityBreakdown:
    """Truncated cosine times keyword-distribution agreement.

    The agreement term is 1 - JSD by default; an article with the all-zero
    distribution marker (no shared keywords) scores 0 outright.
    """
    if len(article_dist) != len(story_dist):
        raise ValueError("keyword distributions are over different keyword sets")
    cos_part = max(0.0, cosine(article_repr, story_repr))
    if float(np.sum(article_dist)) == 0.0:
        kw_part = 0.0
    else:
        jsd = jensen_shannon(article_dist, story_dist)
        kw_part = jsd if jsd_mode == JSD_MODE_DIVERGENCE else 1.0 - jsd
        kw_part = min(1.0, max(0.0, kw_part))
    return SimilarityBreakdown(cosine_part=cos_part, keyword_part=kw_part,
                               thematic=cos_part * kw_part)


def assignment_threshold(num_stories: int, temperature: float) -> float:
    """Adjusted random-assignment probability: 1 - (1 - 1/n)^T."""
    if num_stories < 1:
        raise ValueError("need at least one story")
    return 1.0 - (1.0 - 1.0 / num_stories) ** temperature


def confidence_scores(sims: list[float], temperature: float) -> np.ndarray:
    """Softmax of temperature-scaled similarities (max-shifted for stability)."""
    if len(sims) == 0:
        raise ValueError("no similarities given")
    scaled = temperature * np.asarray(sims, dtype=np.float64)
    scaled -= scaled.max()
    exp = np.exp(scaled)
    return exp / exp.sum()


def assign_article(entry, stories: list[StoryState], config: WindowConfig,
                   strategy: EmbeddingStrategy = EmbeddingStrategy.THEME_WEIGHTED,
                   jsd_mode: str = JSD_MODE_SIMILARITY,
                   cache: dict | None = None) -> AssignmentDecision:
    """Score one article against every candidate story and decide.

    ``entry`` needs ``id``, ``pane``, ``sentence_vectors``, ``sentence_terms``
    and ``term_counts`` attributes. Scoring runs against the stories' cached
    themes and current summaries; ties break toward the larger story, then
    the lexicographically smaller id. A best candidate with zero thematic
    similarity yields confidence 0 (no symbolic or semantic evidence), so
    the article stays unassigned.
    """
    if not stories:
        raise ValueError("no candidate stories")
    if cache is None:
        cache = {}
    sims = []
    for story in stories:
        theme = story.cached_theme
        if not theme.entries:
            sims.append(0.0)
            continue
        art_repr = embed_article(entry.sentence_vectors, entry.sentence_terms,
                                 theme, strategy)
        key = (story.id, entry.pane)
        story_repr = cache.get(key)
        if story_repr is None:
            story_repr = embed_story(story.pss, entry.pane)
            cache[key] = story_repr
        dist_key = ("dist", story.id)
        story_dist = cache.get(dist_key)
        if story_dist is None:
            story_dist = keyword_distribution(story.cached_total_counts, theme)
            cache[dist_key] = story_dist
        art_dist = keyword_distribution(entry.term_counts, theme)
        sims.append(thematic_similarity(art_repr, story_repr, art_dist,
                                        story_dist, jsd_mode).thematic)
    conf = confidence_scores(sims, config.temperature)
    gamma = assignment_threshold(len(stories), config.temperature)
    ranked = sorted(range(len(stories)),
                    key=lambda i: (-conf[i], -stories[i].in_window_size(), stories[i].id))
    best = ranked[0]
    if sims[best] <= 0.0:
        return AssignmentDecision(entry.id, None, 0.0, gamma)
    best_conf = float(conf[best])
    chosen = stories[best].id if best_conf >= gamma else None
    return AssignmentDecision(entry.id, chosen, best_conf, gamma)


def initial_article_theme(term_counts: dict[str, int], arrival_pane: int,
                          window_context: ContextStats, now,
                          config: WindowConfig) -> KeywordSet:
    """Self-theme of a single article against all articles in the window."""
    target = CorpusThemeStats(per_pane_term_counts={arrival_pane: term_counts},
                              decay_factor=float(config.window_slides))
    return thematic_keywords(target, window_context, now, config.keywords_n)


def _kmeans_pp_seed(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding under cosine distance (1 - cos), squared weighting."""
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]), dtype=np.float64)
    centers[0] = X[rng.integers(n)]
    dist = 1.0 - X @ centers[0]
    np.maximum(dist, 0.0, out=dist)
    for j in range(1, k):
        weights = dist ** 2
        total = weights.sum()
        if total > 0:
            idx = int(rng.choice(n, p=weights / total))
        else:
            idx = int(rng.integers(n))
        centers[j] = X[idx]
        np.minimum(dist, np.maximum(1.0 - X @ centers[j], 0.0), out=dist)
    return centers


def _spherical_kmeans(X: np.ndarray, centers: np.ndarray,
                      max_iter: int = 50) -> tuple[np.ndarray, np.ndarray, float]:
    labels = None
    for _ in range(max_iter):
        sims = X @ centers.T
        new_labels = np.argmax(sims, axis=1)
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for j in range(centers.shape[0]):
            members = X[labels == j]
            if members.shape[0] == 0:
                continue  # empty cluster keeps its center, filtered later
            mean = members.mean(axis=0)
            norm = np.linalg.norm(mean)
            if norm > 0:
                centers[j] = mean / norm
    inertia = float(np.sum(1.0 - np.take_along_axis(X @ centers.T,
                                                    labels[:, None], axis=1)))
    return labels, centers, inertia


def discover_seed_stories(reprs: list[tuple[str, np.ndarray]], min_story_size: int,
                          rng_seed, restarts: int = 8) -> list[list[str]]:
    """Cluster unassigned articles into seed stories.

    k = floor(n / min_story_size) centers are seeded k-means++-style under
    cosine distance over ``restarts`` seeded tries; spherical k-means then
    runs to convergence and the lowest-inertia restart wins. Only clusters
    with at least ``min_story_size`` members become stories; clusters whose
    centers collapsed to the same point are merged first.
    """
    n = len(reprs)
    k = n // min_story_size
    if k == 0:
        return []
    X = np.stack([np.asarray(v, dtype=np.float64) for _, v in reprs])
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    np.divide(X, norms, out=X, where=norms > 0)
    rng = np.random.default_rng(rng_seed)
    best = None
    for _ in range(restarts):
        centers = _kmeans_pp_seed(X, k, rng)
        labels, centers, inertia = _spherical_kmeans(X, centers.copy())
        if best is None or inertia < best[0]:
            best = (inertia, labels, centers)
    _, labels, centers = best

    # merge clusters whose centers are identical (duplicate-input degeneracy)
    canonical: dict[bytes, int] = {}
    remap = np.empty(k, dtype=np.int64)
    for j in range(k):
        key = centers[j].tobytes()
        remap[j] = canonical.setdefault(key, j)
    labels = remap[labels]

    groups: dict[int, list[str]] = {}
    for (article_id, _), label in zip(reprs, labels):
        groups.setdefault(int(label), []).append(article_id)
    clusters = [members for members in groups.values()
                if len(members) >= min_story_size]
    order = {aid: i for i, (aid, _) in enumerate(reprs)}
    clusters.sort(key=lambda members: order[members[0]])
    return clusters
