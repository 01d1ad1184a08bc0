import math
import random

import numpy as np
import pytest

from storystream.core import Article, Timestamp, WindowConfig


def make_article(article_id, pane, sentences, label=None, slide_seconds=86400.0,
                 offset=0.0):
    return Article(
        id=article_id,
        time=Timestamp.from_raw(pane * slide_seconds + offset, slide_seconds),
        sentences=list(sentences),
        label=label,
    )


def vocab_sentences(rng, vocab, n_sentences, tokens_per_sentence=6):
    return [" ".join(rng.choices(vocab, k=tokens_per_sentence)) + "."
            for _ in range(n_sentences)]


@pytest.fixture
def small_config():
    return WindowConfig(window_slides=7, min_story_size=3, keywords_n=10,
                        temperature=2.0, encoder_dim=64, rng_seed=13)


def random_unit(rng: random.Random, dim: int) -> np.ndarray:
    vec = np.array([rng.gauss(0, 1) for _ in range(dim)])
    norm = np.linalg.norm(vec)
    while norm == 0:
        vec = np.array([rng.gauss(0, 1) for _ in range(dim)])
        norm = np.linalg.norm(vec)
    return vec / norm


def exp_decay(distance, factor):
    return math.exp(-abs(distance) / factor)
