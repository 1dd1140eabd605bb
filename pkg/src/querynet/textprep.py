"""Query normalization, tokenization, and noun/verb bucketing.

Raw log lines are lowercased and whitespace-collapsed, split into tokens,
and each token is assigned to exactly one part-of-speech bucket.  The
bucketer is a deterministic lexicon-plus-rules classifier: it only has to
reproduce the Noun/Verb/Cardinal partition the downstream scorer consumes,
not full tagging.  Ambiguous words prefer the noun reading, matching the
noun-heavy character of query logs.
"""

from __future__ import annotations

import enum
import re
import string
from dataclasses import dataclass

from .errors import DataError
from .wordnet import Pos, SynsetId, WordNetDb

__all__ = [
    "PRONOUNS",
    "PosBucket",
    "QueryAnalysis",
    "analyze_query",
    "is_cardinal",
    "is_url",
    "normalize",
]


class PosBucket(enum.Enum):
    """Token classes consumed by the pairwise scorer."""

    NOUN = "noun"  # noun-like words, pronouns, and unknown words
    VERB = "verb"  # verb-index words without a noun reading
    CARDINAL = "cardinal"  # digit groups such as 2009 or 12:30
    OTHER = "other"  # in-vocabulary words that are neither nouns nor verbs


#: Closed class of personal/possessive pronouns, bucketed as nouns.
PRONOUNS = frozenset(
    {
        "i", "you", "he", "she", "it", "we", "they",
        "me", "him", "her", "us", "them",
        "my", "your", "his", "its", "our", "their",
    }
)

# One or more letter/digit/hyphen labels (each 1-63 chars, no leading or
# trailing hyphen), a final alphabetic label of 2-6 letters, an optional
# port, and an optional path or query tail.
_URL_RE = re.compile(
    r"(?:[A-Z0-9](?:[A-Z0-9-]{0,61}[A-Z0-9])?\.)+[A-Z]{2,6}"
    r"(?::\d+)?"
    r"(?:/?|[/?]\S+)",
    re.IGNORECASE,
)

# Digit groups joined by single separators: 2009, 12:30, 1-800, 3.14, 1,234.
_CARDINAL_RE = re.compile(r"\d+(?:[.,/:-]\d+)*")


@dataclass(frozen=True)
class QueryAnalysis:
    """Per-query token analysis, computed once and reused for all pairs."""

    query_id: int
    raw: str
    normalized: str
    tokens: tuple[tuple[str, PosBucket], ...]
    is_url_query: bool
    noun_words: tuple[str, ...]
    verb_words: tuple[str, ...]
    has_cardinal: bool
    first_synset: dict[str, SynsetId | None]


def normalize(raw: str) -> str:
    """Trim, collapse internal whitespace to single spaces, and lowercase."""
    return " ".join(raw.split()).lower()


def is_url(query: str) -> bool:
    """True when the query is a single token shaped like a web address.

    Any query with more than one whitespace-separated token is not a URL.
    The single-token pattern requires a real dotted domain with a 2-6 letter
    top-level label, then an optional port and an optional path or query
    string.
    """
    tokens = query.split()
    if len(tokens) != 1:
        return False
    return _URL_RE.fullmatch(tokens[0]) is not None


def is_cardinal(token: str) -> bool:
    """True for digit groups optionally joined by ``. , / : -`` separators.

    Spelled-out numbers are not cardinals; only digit patterns count.
    """
    return _CARDINAL_RE.fullmatch(token) is not None


def _bucket(word: str, db: WordNetDb) -> PosBucket:
    if is_cardinal(word):
        return PosBucket.CARDINAL
    if word in PRONOUNS:
        return PosBucket.NOUN
    if db.morphy(word, Pos.NOUN):
        return PosBucket.NOUN
    if db.morphy(word, Pos.VERB):
        return PosBucket.VERB
    if not db.synsets_for(word):
        # Entirely out of vocabulary: treat as a proper noun.
        return PosBucket.NOUN
    return PosBucket.OTHER


def analyze_query(raw: str, db: WordNetDb, query_id: int) -> QueryAnalysis:
    """Normalize, tokenize, and bucket one query.

    Tokens are the whitespace-split words of the normalized query with
    leading and trailing punctuation stripped, except that a single-token
    query recognized as a URL keeps its token intact.  Tokens that are
    nothing but punctuation are dropped.

    Raises :class:`~querynet.errors.DataError` when nothing remains after
    normalization.
    """
    normalized = normalize(raw)
    if not normalized:
        raise DataError(f"blank query: {raw!r}")
    url_query = is_url(normalized)
    if url_query:
        surfaces = [normalized]
    else:
        surfaces = []
        for token in normalized.split(" "):
            stripped = token.strip(string.punctuation)
            if stripped:
                surfaces.append(stripped)
    tokens = tuple((word, _bucket(word, db)) for word in surfaces)
    noun_words = tuple(w for w, b in tokens if b is PosBucket.NOUN)
    verb_words = tuple(w for w, b in tokens if b is PosBucket.VERB)
    first_synset: dict[str, SynsetId | None] = {}
    for word in noun_words + verb_words:
        if word not in first_synset:
            senses = db.synsets_for(word)
            first_synset[word] = senses[0] if senses else None
    return QueryAnalysis(
        query_id=query_id,
        raw=raw,
        normalized=normalized,
        tokens=tokens,
        is_url_query=url_query,
        noun_words=noun_words,
        verb_words=verb_words,
        has_cardinal=any(b is PosBucket.CARDINAL for _, b in tokens),
        first_synset=first_synset,
    )
