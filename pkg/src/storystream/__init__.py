"""Single-pass online story discovery for timestamped article streams."""

from .cluster import (AssignmentDecision, SimilarityBreakdown,
                      assign_article, assignment_threshold, confidence_scores,
                      discover_seed_stories, initial_article_theme,
                      jensen_shannon, thematic_similarity)
from .core import (Article, EncoderError, IngestionError, Timestamp,
                   WindowConfig, pane_index)
from .embed import (EmbeddingStrategy, embed_article, embed_story,
                    embed_story_oracle)
from .encoder import (BridgeEncoder, EncoderSpec, HashedEncoder, encode_batch,
                      hashed_encode, make_encoder)
from .engine import EngineState, SlideReport, process_slide, run_stream
from .estimator import StoryDiscovery
from .metrics import LabeledPartition, ami, ari, b_cubed, windowed_eval
from .summary import (PSS, PaneSummary, StoryState, context_stats, pss_add,
                      pss_evict, pss_theme_stats)
from .synth import gen_synthetic
from .theme import (ContextStats, CorpusThemeStats, KeywordSet, dist,
                    keyword_distribution, rec_pop, thematic_keywords)
from .tokenizer import (DEFAULT_STOPWORDS, article_term_counts, extract_terms,
                        split_sentences, tokenize_article)

__version__ = "0.1.0"

__all__ = [
    "Article", "AssignmentDecision", "BridgeEncoder", "ContextStats",
    "CorpusThemeStats", "EmbeddingStrategy", "EncoderError", "EncoderSpec",
    "EngineState", "HashedEncoder", "IngestionError", "KeywordSet",
    "LabeledPartition", "PSS", "PaneSummary", "SimilarityBreakdown",
    "SlideReport", "StoryDiscovery", "StoryState", "Timestamp", "WindowConfig",
    "ami", "ari", "assign_article", "assignment_threshold", "article_term_counts",
    "b_cubed", "confidence_scores", "context_stats", "discover_seed_stories",
    "dist", "embed_article", "embed_story", "embed_story_oracle", "encode_batch",
    "extract_terms", "gen_synthetic", "hashed_encode", "initial_article_theme",
    "jensen_shannon", "keyword_distribution", "make_encoder", "pane_index",
    "process_slide", "pss_add", "pss_evict", "pss_theme_stats", "rec_pop",
    "run_stream", "split_sentences", "thematic_keywords", "thematic_similarity",
    "tokenize_article", "windowed_eval",
]
