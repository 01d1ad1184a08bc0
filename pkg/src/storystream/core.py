"""Shared domain types, time discretization, and run configuration."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

DAY_SECONDS = 86400.0


class IngestionError(ValueError):
    """A record could not be turned into a valid article."""


class EncoderError(RuntimeError):
    """The sentence encoder failed or violated its contract."""


def pane_index(raw_time: float, slide_seconds: float) -> int:
    """Map an absolute time (seconds since the Unix epoch, UTC) to its pane.

    Panes partition the time axis into consecutive slide-sized intervals,
    so all decay arithmetic downstream works in integer pane units.
    """
    if slide_seconds <= 0:
        raise ValueError(f"slide_seconds must be positive, got {slide_seconds}")
    return math.floor(raw_time / slide_seconds)


@dataclass(frozen=True)
class Timestamp:
    raw_time: float
    pane: int

    @classmethod
    def from_raw(cls, raw_time: float, slide_seconds: float) -> "Timestamp":
        return cls(raw_time=float(raw_time), pane=pane_index(raw_time, slide_seconds))


@dataclass
class Article:
    """One stream unit: an ordered list of sentences with per-sentence term counts.

    ``sentence_terms`` is filled by the tokenizer; until then it is empty.
    ``label`` is an optional gold story id used only for evaluation.
    """

    id: str
    time: Timestamp
    sentences: list[str]
    sentence_terms: list[dict[str, int]] = field(default_factory=list)
    label: str | None = None


@dataclass
class WindowConfig:
    """Window/clustering hyperparameters shared by every module.

    Defaults follow the reference setting: a 7-slide window slid by one day,
    10 keywords per theme, softmax temperature 2.0.
    """

    window_slides: int = 7
    slide_seconds: float = DAY_SECONDS
    min_story_size: int = 8
    keywords_n: int = 10
    temperature: float = 2.0
    encoder_dim: int = 256
    rng_seed: int = 42

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.window_slides < 1:
            raise ValueError("window_slides must be >= 1")
        if self.slide_seconds <= 0:
            raise ValueError("slide_seconds must be positive")
        if self.min_story_size < 1:
            raise ValueError("min_story_size must be >= 1")
        if self.keywords_n < 1:
            raise ValueError("keywords_n must be >= 1")
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")
        if self.encoder_dim < 1:
            raise ValueError("encoder_dim must be >= 1")

    def to_dict(self) -> dict:
        return {
            "window_slides": self.window_slides,
            "slide_seconds": self.slide_seconds,
            "min_story_size": self.min_story_size,
            "keywords_n": self.keywords_n,
            "temperature": self.temperature,
            "encoder_dim": self.encoder_dim,
            "rng_seed": self.rng_seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "WindowConfig":
        known = {f: d[f] for f in cls.__dataclass_fields__ if f in d}
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown window config keys: {sorted(unknown)}")
        return cls(**known)
