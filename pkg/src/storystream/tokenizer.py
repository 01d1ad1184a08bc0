"""Deterministic sentence splitting and (1,2)-gram term extraction.

Everything here is a pure function: no model files, no external NLP
pipeline, so runs are reproducible across machines.
"""

from __future__ import annotations

import re
from collections import Counter

from .core import Article

# Fixed English stopword list (classic function-word inventory). Overridable
# per run via a stopword file, one term per line.
DEFAULT_STOPWORDS = frozenset("""
i me my myself we our ours ourselves you your yours yourself yourselves
he him his himself she her hers herself it its itself they them their
theirs themselves what which who whom this that these those am is are was
were be been being have has had having do does did doing a an the and but
if or because as until while of at by for with about against between into
through during before after above below to from up down in out on off over
under again further then once here there when where why how all any both
each few more most other some such no nor not only own same so than too
very s t can will just don should now d ll m o re ve y ain aren couldn
didn doesn hadn hasn haven isn ma mightn mustn needn shan shouldn wasn
weren won wouldn said says say would could also may might must shall us
mr mrs ms dr via per amid among upon within without across toward towards
since despite however although though yet still already even ever never
always many much several one two three new old last first next
""".split())

# Trailing tokens that end with sentence punctuation but do not end a
# sentence.
ABBREVIATIONS = frozenset({
    "Mr.", "Mrs.", "Ms.", "Dr.", "Prof.", "Sr.", "Jr.", "St.", "Mt.",
    "U.S.", "U.K.", "U.N.", "E.U.", "D.C.", "Inc.", "Ltd.", "Co.",
    "Corp.", "vs.", "etc.", "approx.", "No.", "Gen.", "Gov.", "Sen.",
    "Rep.", "Capt.", "Col.", "Sgt.", "Jan.", "Feb.", "Mar.", "Apr.",
    "Jun.", "Jul.", "Aug.", "Sep.", "Sept.", "Oct.", "Nov.", "Dec.",
})

# Letters/digits with interior hyphens retained; underscores excluded.
_TOKEN_RE = re.compile(r"[^\W_]+(?:-[^\W_]+)*", re.UNICODE)
# Sentence-final punctuation followed by whitespace and an upper-case
# letter or digit.
_BOUNDARY_RE = re.compile(r"[.!?]+(?=(\s+)[A-Z0-9])")
_TRAILING_TOKEN_RE = re.compile(r"(\S+)$")


def split_sentences(text: str) -> list[str]:
    """Split raw text into sentences on ``. ! ?`` + whitespace + capital/digit.

    A fixed abbreviation list ("U.S.", "Mr.", ...) suppresses false
    boundaries. Empty or whitespace-only fragments are dropped.
    """
    if not text or not text.strip():
        return []
    pieces = []
    start = 0
    for m in _BOUNDARY_RE.finditer(text):
        end = m.end()
        tail = _TRAILING_TOKEN_RE.search(text, 0, end)
        if tail and tail.group(1) in ABBREVIATIONS:
            continue
        pieces.append(text[start:end])
        start = end + len(m.group(1))
    pieces.append(text[start:])
    return [p.strip() for p in pieces if p.strip()]


def word_tokens(text: str) -> list[str]:
    """Lowercased word tokens, split on whitespace/punctuation boundaries."""
    return _TOKEN_RE.findall(text.lower())


def content_tokens(sentence: str, stopwords: frozenset = DEFAULT_STOPWORDS) -> list[str]:
    """Word tokens with stopwords removed, in original order."""
    return [t for t in word_tokens(sentence) if t not in stopwords]


def extract_terms(sentence: str, stopwords: frozenset = DEFAULT_STOPWORDS) -> dict[str, int]:
    """Count (1,2)-gram terms of a sentence after stopword removal.

    Unigrams are the surviving tokens; bigrams join tokens that are
    adjacent in the surviving sequence, e.g. "evacuation order".
    """
    survivors = content_tokens(sentence, stopwords)
    counts = Counter(survivors)
    counts.update(f"{a} {b}" for a, b in zip(survivors, survivors[1:]))
    return dict(counts)


def article_term_counts(article: Article) -> dict[str, int]:
    """Element-wise sum of an article's per-sentence term counts."""
    total: Counter = Counter()
    for counts in article.sentence_terms:
        total.update(counts)
    return dict(total)


def tokenize_article(article: Article, stopwords: frozenset = DEFAULT_STOPWORDS) -> Article:
    """Fill ``sentence_terms`` in place, dropping sentences with no terms.

    Sentences that yield zero surviving terms carry no theme signal and
    cannot be hashed-encoded, so they are removed together with their slot
    in ``sentence_terms`` (the two lists stay aligned).
    """
    kept_sentences = []
    kept_terms = []
    for sentence in article.sentences:
        terms = extract_terms(sentence, stopwords)
        if terms:
            kept_sentences.append(sentence)
            kept_terms.append(terms)
    article.sentences = kept_sentences
    article.sentence_terms = kept_terms
    return article


def load_stopwords(path: str) -> frozenset:
    """Read a stopword file: one term per line, UTF-8."""
    with open(path, encoding="utf-8") as f:
        return frozenset(line.strip().lower() for line in f if line.strip())
