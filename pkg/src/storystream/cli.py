"""Command-line entry point: run, eval, gen-synthetic, bench."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time

from .bench import run_scaling_bench
from .core import IngestionError, EncoderError
from .embed import EmbeddingStrategy
from .encoder import make_encoder
from .engine import run_stream, report_from_dict
from .io import (RunSettings, article_from_record, load_settings,
                 read_articles_jsonl, read_records_jsonl, write_jsonl_line)
from .metrics import windowed_eval
from .synth import gen_synthetic
from .tokenizer import DEFAULT_STOPWORDS, load_stopwords

log = logging.getLogger("storystream")

EVAL_COLUMNS = ["window_pane", "n_articles", "n_pred_clusters",
                "n_gold_clusters", "b3_p", "b3_r", "b3_f1", "ami", "ari"]


def _add_override_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="TOML config file")
    parser.add_argument("--window-slides", type=int)
    parser.add_argument("--slide-seconds", type=float)
    parser.add_argument("--min-story-size", type=int)
    parser.add_argument("--keywords-n", type=int)
    parser.add_argument("--temperature", type=float)
    parser.add_argument("--encoder-dim", type=int)
    parser.add_argument("--seed", type=int, help="engine rng seed")
    parser.add_argument("--encoder", choices=["hashed", "bridge"])
    parser.add_argument("--encoder-seed", type=int)
    parser.add_argument("--endpoint", help="bridge base URL")
    parser.add_argument("--batch-size", type=int)
    parser.add_argument("--strategy", choices=["theme_weighted", "uniform_mean"])
    parser.add_argument("--jsd-mode", choices=["similarity", "divergence"])
    parser.add_argument("--stopword-file")


def resolve_settings(args) -> RunSettings:
    """Config file < CLI flags < STORYSTREAM_SEED, in increasing precedence."""
    settings = load_settings(getattr(args, "config", None))
    window_flags = {
        "window_slides": args.window_slides,
        "slide_seconds": args.slide_seconds,
        "min_story_size": args.min_story_size,
        "keywords_n": args.keywords_n,
        "temperature": args.temperature,
        "encoder_dim": args.encoder_dim,
        "rng_seed": args.seed,
    }
    for key, value in window_flags.items():
        if value is not None:
            setattr(settings.window, key, value)
    if args.encoder_dim is not None:
        settings.encoder.dim = args.encoder_dim
    if args.encoder is not None:
        settings.encoder.kind = args.encoder
    if args.encoder_seed is not None:
        settings.encoder.seed = args.encoder_seed
    if args.endpoint is not None:
        settings.encoder.endpoint = args.endpoint
    if args.batch_size is not None:
        settings.encoder.batch_size = args.batch_size
    if args.strategy is not None:
        settings.strategy = args.strategy
    if args.jsd_mode is not None:
        settings.jsd_mode = args.jsd_mode
    if args.stopword_file is not None:
        settings.stopword_file = args.stopword_file
    env_seed = os.environ.get("STORYSTREAM_SEED")
    if env_seed is not None:
        settings.window.rng_seed = int(env_seed)
    settings.validate()
    if settings.encoder.kind == "bridge" and not settings.encoder.endpoint:
        raise ValueError("bridge encoder requires --endpoint")
    return settings


def cmd_run(args) -> int:
    settings = resolve_settings(args)
    stopwords = (load_stopwords(settings.stopword_file)
                 if settings.stopword_file else DEFAULT_STOPWORDS)
    articles = read_articles_jsonl(args.input, settings.window.slide_seconds)
    encoder = make_encoder(settings.encoder, stopwords)
    os.makedirs(args.out, exist_ok=True)
    stories_path = os.path.join(args.out, "stories.jsonl")
    expired_path = os.path.join(args.out, "expired.jsonl")
    meta_path = os.path.join(args.out, "run_meta.json")

    meta = {
        "settings": settings.to_dict(),
        "seed": settings.window.rng_seed,
        "articles_ingested": len(articles),
        "rejected_articles": [],
        "slides": 0,
        "stories_created": 0,
        "stories_expired": 0,
        "wall_time_per_slide_s": [],
        "truncated": False,
    }
    strategy = EmbeddingStrategy(settings.strategy)
    t_last = time.perf_counter()

    with open(stories_path, "w", encoding="utf-8") as stories_f, \
            open(expired_path, "w", encoding="utf-8") as expired_f:

        def on_slide(state, report):
            nonlocal t_last
            now = time.perf_counter()
            meta["wall_time_per_slide_s"].append(now - t_last)
            t_last = now
            meta["slides"] += 1
            meta["stories_created"] += len(report.new_stories)
            meta["stories_expired"] += len(report.expired_stories)
            meta["rejected_articles"].extend(report.rejected_articles)
            write_jsonl_line(stories_f, report.to_dict())
            for record in report.expired_records:
                write_jsonl_line(expired_f, record)

        try:
            run_stream(articles, settings.window, encoder,
                       strategy=strategy, jsd_mode=settings.jsd_mode,
                       stopwords=stopwords, on_slide=on_slide)
        except Exception as exc:
            write_jsonl_line(stories_f, {"truncated": True, "error": str(exc)})
            meta["truncated"] = True
            with open(meta_path, "w", encoding="utf-8") as f:
                json.dump(meta, f, indent=2, sort_keys=True)
            raise

    with open(meta_path, "w", encoding="utf-8") as f:
        json.dump(meta, f, indent=2, sort_keys=True)
    print(f"wrote {meta['slides']} slide report(s) to {stories_path}")
    return 0


def cmd_eval(args) -> int:
    meta_path = args.run_meta or os.path.join(os.path.dirname(args.stories) or ".",
                                              "run_meta.json")
    with open(meta_path, encoding="utf-8") as f:
        meta = json.load(f)
    window_slides = meta["settings"]["window"]["window_slides"]
    slide_seconds = meta["settings"]["window"]["slide_seconds"]
    policy = args.policy or meta["settings"]["eval"]["policy"]
    ami_norm = meta["settings"]["eval"]["ami_normalization"]

    reports = [report_from_dict(rec) for _, rec in read_records_jsonl(args.stories)
               if "pane" in rec]
    rejected = set(meta.get("rejected_articles", []))
    article_meta = {}
    missing = []
    for line_no, record in read_records_jsonl(args.input):
        article = article_from_record(record, slide_seconds, f"line {line_no}")
        if article.id in rejected:
            continue
        if article.label is None:
            missing.append(article.id)
        article_meta[article.id] = (article.time.pane, article.label)
    if missing:
        print(f"error: articles missing gold labels: {', '.join(missing)}",
              file=sys.stderr)
        return 2

    rows, averages = windowed_eval(reports, article_meta, window_slides,
                                   policy=policy, ami_average_method=ami_norm)
    out_path = args.out or os.path.join(os.path.dirname(args.stories) or ".",
                                        "eval.csv")
    with open(out_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(EVAL_COLUMNS)
        for row in rows:
            writer.writerow([row.window_pane, row.n_articles, row.n_pred_clusters,
                             row.n_gold_clusters, row.b3_p, row.b3_r, row.b3_f1,
                             row.ami, row.ari])
        if rows:
            writer.writerow(["average", "", "", "", averages["b3_p"],
                             averages["b3_r"], averages["b3_f1"],
                             averages["ami"], averages["ari"]])
    if not rows:
        print("no scorable windows")
        return 0
    print(f"averages: b3_f1={averages['b3_f1']:.3f} ami={averages['ami']:.3f} "
          f"ari={averages['ari']:.3f}")
    return 0


def cmd_gen_synthetic(args) -> int:
    records = gen_synthetic(
        stories=args.stories, per_story_per_pane=args.per_pane, panes=args.panes,
        vocab_size=args.vocab, noise_ratio=args.noise_ratio, seed=args.seed,
        sentences_per_article=args.sentences,
        tokens_per_sentence=args.tokens_per_sentence)
    with open(args.out, "w", encoding="utf-8") as f:
        for record in records:
            write_jsonl_line(f, record)
    print(f"wrote {len(records)} articles to {args.out}")
    return 0


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")]
    rows = run_scaling_bench(sizes, stories=args.stories, seed=args.seed)
    columns = ["target_window_articles", "articles_total", "slides",
               "median_slide_s", "max_story_panes", "window_slides"]
    writer = csv.writer(sys.stdout)
    writer.writerow(columns)
    for row in rows:
        writer.writerow([row[c] for c in columns])
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(columns)
            for row in rows:
                writer.writerow([row[c] for c in columns])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="storystream",
        description="Single-pass online story discovery over article streams")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="replay a stream and write slide reports")
    p_run.add_argument("input", help="article JSONL file")
    p_run.add_argument("--out", required=True, help="output directory")
    _add_override_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_eval = sub.add_parser("eval", help="score slide reports against gold labels")
    p_eval.add_argument("stories", help="stories.jsonl from a run")
    p_eval.add_argument("input", help="article JSONL file with labels")
    p_eval.add_argument("--policy", choices=["singletons", "exclude"])
    p_eval.add_argument("--run-meta", help="run_meta.json path "
                                           "(default: next to stories.jsonl)")
    p_eval.add_argument("--out", help="eval.csv path")
    p_eval.set_defaults(func=cmd_eval)

    p_gen = sub.add_parser("gen-synthetic", help="generate a labeled corpus")
    p_gen.add_argument("--out", required=True)
    p_gen.add_argument("--stories", type=int, default=4)
    p_gen.add_argument("--per-pane", type=int, default=6,
                       help="articles per story per pane")
    p_gen.add_argument("--panes", type=int, default=10)
    p_gen.add_argument("--vocab", type=int, default=20)
    p_gen.add_argument("--noise-ratio", type=float, default=0.3)
    p_gen.add_argument("--seed", type=int, default=7)
    p_gen.add_argument("--sentences", type=int, default=4)
    p_gen.add_argument("--tokens-per-sentence", type=int, default=7)
    p_gen.set_defaults(func=cmd_gen_synthetic)

    p_bench = sub.add_parser("bench", help="per-slide scaling benchmark")
    p_bench.add_argument("--sizes", default="1000,2000,4000")
    p_bench.add_argument("--stories", type=int, default=8)
    p_bench.add_argument("--seed", type=int, default=11)
    p_bench.add_argument("--out", help="also write the CSV here")
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (IngestionError, EncoderError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
