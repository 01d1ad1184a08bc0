"""Labeled synthetic corpus generator for benchmarks and tests.

Each planted story owns a private token vocabulary; articles mix story
sentences with sentences drawn from a global shared-noise pool. Output is
deterministic under the seed.
"""

from __future__ import annotations

import math
import random

from .core import DAY_SECONDS


def gen_synthetic(stories: int = 4, per_story_per_pane: int = 6, panes: int = 10,
                  vocab_size: int = 20, noise_ratio: float = 0.3, seed: int = 7,
                  sentences_per_article: int = 4, tokens_per_sentence: int = 7,
                  noise_vocab_size: int | None = None, start_pane: int = 0,
                  slide_seconds: float = DAY_SECONDS) -> list[dict]:
    """Emit article records: ``stories * per_story_per_pane`` per pane.

    Story ``i`` samples from tokens ``s{i}w0..s{i}w{V-1}`` (disjoint across
    stories); every article additionally gets ``ceil(noise_ratio * S)``
    sentences from the shared ``nzw*`` pool. Timestamps interleave the
    stories evenly inside each pane.
    """
    if min(stories, per_story_per_pane, panes, vocab_size,
           sentences_per_article, tokens_per_sentence) < 1:
        raise ValueError("all generator counts must be positive")
    if noise_ratio < 0:
        raise ValueError("noise_ratio must be non-negative")
    rng = random.Random(seed)
    story_vocab = [[f"s{i}w{j}" for j in range(vocab_size)] for i in range(stories)]
    noise_vocab = [f"nzw{j}" for j in range(noise_vocab_size or vocab_size)]
    n_noise = math.ceil(noise_ratio * sentences_per_article)
    per_pane_total = stories * per_story_per_pane
    step = slide_seconds / (per_pane_total + 1)

    records = []
    for pane in range(start_pane, start_pane + panes):
        slot = 0
        for j in range(per_story_per_pane):
            for i in range(stories):
                slot += 1
                sentences = [
                    " ".join(rng.choices(story_vocab[i], k=tokens_per_sentence)) + "."
                    for _ in range(sentences_per_article)
                ]
                sentences += [
                    " ".join(rng.choices(noise_vocab, k=tokens_per_sentence)) + "."
                    for _ in range(n_noise)
                ]
                records.append({
                    "id": f"p{pane:04d}-g{i}-a{j}",
                    "time": pane * slide_seconds + slot * step,
                    "label": f"gold-{i}",
                    "sentences": sentences,
                })
    return records
