"""Scaling benchmark: per-slide wall time at increasing in-window loads.

The engine's per-slide cost should grow linearly with the number of
in-window articles for a fixed story count; each story's summary must stay
bounded at one triplet per window pane.
"""

from __future__ import annotations

import gc
import time

from .core import WindowConfig
from .encoder import HashedEncoder
from .engine import run_stream
from .io import article_from_record
from .synth import gen_synthetic


def run_scaling_bench(sizes: list[int], stories: int = 8, panes: int = 16,
                      noise_ratio: float = 0.2, seed: int = 11,
                      encoder_dim: int = 256) -> list[dict]:
    """One row per target in-window article count.

    ``median_slide_s`` is measured over slides with a full window only, so
    cold-start seeding does not skew the medians the linearity check uses.
    ``max_story_panes`` is the structural memory bound: the largest number
    of pane summaries any story held at any point of the run.
    """
    rows = []
    for size in sizes:
        config = WindowConfig(rng_seed=seed, encoder_dim=encoder_dim)
        per_story_per_pane = max(1, round(size / (config.window_slides * stories)))
        config.min_story_size = per_story_per_pane
        records = gen_synthetic(
            stories=stories, per_story_per_pane=per_story_per_pane, panes=panes,
            noise_ratio=noise_ratio, seed=seed,
            slide_seconds=config.slide_seconds)
        articles = [article_from_record(r, config.slide_seconds) for r in records]
        encoder = HashedEncoder(config.encoder_dim, config.rng_seed)
        gc.collect()  # isolate slide timings from earlier allocation churn

        slide_times = []
        max_story_panes = 0
        last = time.perf_counter()

        def on_slide(state, report):
            nonlocal last, max_story_panes
            now = time.perf_counter()
            slide_times.append(now - last)
            last = now
            for story in state.stories.values():
                max_story_panes = max(max_story_panes, len(story.pss.panes))

        reports = run_stream(articles, config, encoder, on_slide=on_slide)
        first_pane = reports[0].pane
        full = [t for t, r in zip(slide_times, reports)
                if r.pane - first_pane >= config.window_slides - 1]
        full.sort()
        median = full[len(full) // 2] if full else 0.0
        rows.append({
            "target_window_articles": size,
            "articles_total": len(articles),
            "slides": len(reports),
            "median_slide_s": median,
            "max_story_panes": max_story_panes,
            "window_slides": config.window_slides,
        })
    return rows
