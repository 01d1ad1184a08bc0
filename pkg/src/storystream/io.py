"""Article-record parsing, JSONL helpers, and run configuration files."""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .core import Article, IngestionError, Timestamp, WindowConfig
from .encoder import EncoderSpec
from .tokenizer import split_sentences


def parse_raw_time(value, where: str) -> float:
    """Accept epoch seconds (number) or an ISO-8601 string; UTC if naive."""
    if isinstance(value, bool):
        raise IngestionError(f"{where}: time must be a number or ISO string")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        text = value.strip()
        if text.endswith(("Z", "z")):
            text = text[:-1] + "+00:00"
        try:
            dt = datetime.fromisoformat(text)
        except ValueError as exc:
            raise IngestionError(f"{where}: bad time {value!r}: {exc}") from exc
        if dt.tzinfo is None:
            dt = dt.replace(tzinfo=timezone.utc)
        return dt.timestamp()
    raise IngestionError(f"{where}: time must be a number or ISO string")


def article_from_record(record: dict, slide_seconds: float,
                        where: str = "record") -> Article:
    """Validate one input record and build an (untokenized) article.

    Exactly one of ``text`` / ``sentences`` must be present; a title, when
    given, is prepended as the first sentence.
    """
    if not isinstance(record, dict):
        raise IngestionError(f"{where}: expected a JSON object")
    article_id = record.get("id")
    if not isinstance(article_id, str) or not article_id:
        raise IngestionError(f"{where}: missing or invalid 'id'")
    where = f"{where} (article {article_id!r})"
    if "time" not in record:
        raise IngestionError(f"{where}: missing 'time'")
    raw_time = parse_raw_time(record["time"], where)
    has_text = "text" in record
    has_sentences = "sentences" in record
    if has_text == has_sentences:
        raise IngestionError(f"{where}: exactly one of 'text' or 'sentences' required")
    if has_sentences:
        sentences = record["sentences"]
        if (not isinstance(sentences, list)
                or not all(isinstance(s, str) for s in sentences)):
            raise IngestionError(f"{where}: 'sentences' must be a list of strings")
        sentences = list(sentences)
    else:
        if not isinstance(record["text"], str):
            raise IngestionError(f"{where}: 'text' must be a string")
        sentences = split_sentences(record["text"])
    title = record.get("title")
    if title is not None:
        if not isinstance(title, str):
            raise IngestionError(f"{where}: 'title' must be a string")
        if title.strip():
            sentences = [title.strip()] + sentences
    label = record.get("label")
    if label is not None and not isinstance(label, str):
        raise IngestionError(f"{where}: 'label' must be a string")
    return Article(
        id=article_id,
        time=Timestamp.from_raw(raw_time, slide_seconds),
        sentences=sentences,
        label=label,
    )


def read_records_jsonl(path: str) -> list[tuple[int, dict]]:
    """Read (line_number, record) pairs, skipping blank lines."""
    out = []
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                out.append((line_no, json.loads(line)))
            except json.JSONDecodeError as exc:
                raise IngestionError(f"line {line_no}: invalid JSON: {exc}") from exc
    return out


def read_articles_jsonl(path: str, slide_seconds: float) -> list[Article]:
    articles = []
    seen: dict[str, int] = {}
    for line_no, record in read_records_jsonl(path):
        article = article_from_record(record, slide_seconds, f"line {line_no}")
        if article.id in seen:
            raise IngestionError(
                f"line {line_no}: duplicate article id {article.id!r} "
                f"(first seen at line {seen[article.id]})")
        seen[article.id] = line_no
        articles.append(article)
    return articles


def write_jsonl_line(f, obj: dict):
    f.write(json.dumps(obj, sort_keys=True, separators=(",", ":"),
                       ensure_ascii=False))
    f.write("\n")


@dataclass
class RunSettings:
    """Fully resolved run configuration (window + encoder + switches)."""

    window: WindowConfig = field(default_factory=WindowConfig)
    encoder: EncoderSpec = field(default_factory=EncoderSpec)
    strategy: str = "theme_weighted"
    jsd_mode: str = "similarity"
    eval_policy: str = "singletons"
    ami_normalization: str = "arithmetic"
    stopword_file: str | None = None

    def validate(self):
        self.window.validate()
        if self.encoder.dim != self.window.encoder_dim:
            raise ValueError(
                f"encoder dim {self.encoder.dim} != window encoder_dim "
                f"{self.window.encoder_dim}")
        if self.strategy not in ("theme_weighted", "uniform_mean"):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.jsd_mode not in ("similarity", "divergence"):
            raise ValueError(f"unknown jsd_mode {self.jsd_mode!r}")
        if self.eval_policy not in ("singletons", "exclude"):
            raise ValueError(f"unknown eval policy {self.eval_policy!r}")
        if self.ami_normalization not in ("arithmetic", "max"):
            raise ValueError(f"unknown ami normalization {self.ami_normalization!r}")

    def to_dict(self) -> dict:
        return {
            "window": self.window.to_dict(),
            "encoder": {
                "kind": self.encoder.kind,
                "dim": self.encoder.dim,
                "seed": self.encoder.seed,
                "endpoint": self.encoder.endpoint or "",
                "batch_size": self.encoder.batch_size,
                "timeout": self.encoder.timeout,
                "retries": self.encoder.retries,
            },
            "embedding": {"strategy": self.strategy},
            "sim": {"jsd_mode": self.jsd_mode},
            "eval": {"policy": self.eval_policy,
                     "ami_normalization": self.ami_normalization},
            "tokenize": {"stopword_file": self.stopword_file or ""},
        }


def settings_from_dict(data: dict) -> RunSettings:
    settings = RunSettings()
    window = dict(data.get("window", {}))
    if window:
        settings.window = WindowConfig.from_dict(window)
    enc = dict(data.get("encoder", {}))
    if enc:
        unknown = set(enc) - set(EncoderSpec.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown encoder config keys: {sorted(unknown)}")
        enc.setdefault("dim", settings.window.encoder_dim)
        if enc.get("endpoint") == "":
            enc["endpoint"] = None
        settings.encoder = EncoderSpec(**enc)
    else:
        settings.encoder = EncoderSpec(dim=settings.window.encoder_dim)
    settings.strategy = data.get("embedding", {}).get("strategy", settings.strategy)
    settings.jsd_mode = data.get("sim", {}).get("jsd_mode", settings.jsd_mode)
    eval_section = data.get("eval", {})
    settings.eval_policy = eval_section.get("policy", settings.eval_policy)
    settings.ami_normalization = eval_section.get("ami_normalization",
                                                  settings.ami_normalization)
    stopword_file = data.get("tokenize", {}).get("stopword_file", "")
    settings.stopword_file = stopword_file or None
    settings.validate()
    return settings


def load_settings(path: str | None = None) -> RunSettings:
    if path is None:
        return RunSettings()
    with open(path, "rb") as f:
        return settings_from_dict(tomllib.load(f))


def _toml_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return repr(value)
    return json.dumps(value, ensure_ascii=False)


def settings_to_toml(settings: RunSettings) -> str:
    """Emit the flat key=value sections read back by :func:`load_settings`."""
    lines = []
    for section, keys in settings.to_dict().items():
        lines.append(f"[{section}]")
        for key, value in keys.items():
            lines.append(f"{key} = {_toml_value(value)}")
        lines.append("")
    return "\n".join(lines)
