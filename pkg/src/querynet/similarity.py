"""Pairwise query relatedness scoring.

A pair of queries is scored bucket by bucket: noun words against noun
words, verb words against verb words.  Within a bucket every ordered word
pair contributes the Wu-Palmer similarity of the words' first senses,
normalized by the combined bucket size, plus a flat bonus when the words
are within a small edit distance of each other.  Queries that are URLs or
that contain cardinal numbers score zero against everything.

The accumulation order, the skip rules (a word without any synsets skips
the pair *and* the bonus), and the falsy-similarity rule (the bonus still
applies when the similarity lookup succeeds but returns nothing) are all
load-bearing: the batch engine and this one-pair-at-a-time scorer must
agree bit for bit, and tests hold them to that.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

from .textprep import QueryAnalysis
from .wordnet import SynsetId, WordNetDb

#: Default maximum edit distance that earns the flat bonus.
DEFAULT_BONUS_CUTOFF = 2
#: Default flat bonus added for each close-spelling word pair.
DEFAULT_BONUS_VALUE = 0.2

WupFn = Callable[[SynsetId, SynsetId], Optional[float]]


@dataclass(frozen=True)
class PairScore:
    """Relatedness of one unordered query pair, keyed ``a < b``."""

    a: int
    b: int
    noun_weight: float
    verb_weight: float
    total: float
    jaccard: Optional[float] = None

    def __post_init__(self) -> None:
        if self.a >= self.b:
            raise ValueError(f"pair ids must satisfy a < b, got ({self.a}, {self.b})")
        if self.noun_weight < 0 or self.verb_weight < 0 or self.total < 0:
            raise ValueError("score components must be non-negative")
        if self.total != self.noun_weight + self.verb_weight:
            raise ValueError("total must equal noun_weight + verb_weight exactly")
        if self.jaccard is not None and not 0.0 <= self.jaccard <= 1.0:
            raise ValueError(f"jaccard must lie in [0, 1], got {self.jaccard}")


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance with unit insert/delete/substitute costs."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i] + [0] * len(b)
        for j, cb in enumerate(b, start=1):
            current[j] = min(
                previous[j] + 1,  # delete
                current[j - 1] + 1,  # insert
                previous[j - 1] + (ca != cb),  # substitute / keep
            )
        previous = current
    return previous[-1]


def bucket_pair_weight(
    words1: Sequence[str],
    words2: Sequence[str],
    senses1: Mapping[str, Optional[SynsetId]],
    senses2: Mapping[str, Optional[SynsetId]],
    wup: WupFn,
    bonus_cutoff: int = DEFAULT_BONUS_CUTOFF,
    bonus_value: float = DEFAULT_BONUS_VALUE,
) -> float:
    """Accumulated relatedness between two same-bucket word lists.

    For every ordered pair (w1, w2): the pair is skipped outright —
    including the bonus — when either word has no synsets; otherwise the
    first-sense similarity, when truthy, contributes ``s / (|words1| +
    |words2|)``, and independently an edit distance of at most
    ``bonus_cutoff`` contributes ``bonus_value``.  The two additions keep
    this exact order so float results are reproducible.
    """
    if not words1 or not words2:
        return 0.0
    denominator = len(words1) + len(words2)
    weight = 0.0
    for w1 in words1:
        s1 = senses1[w1]
        for w2 in words2:
            s2 = senses2[w2]
            if s1 is None or s2 is None:
                continue
            similarity = wup(s1, s2)
            if similarity:
                weight += similarity / denominator
            if edit_distance(w1, w2) <= bonus_cutoff:
                weight += bonus_value
    return weight


def semantic_similarity(
    q1: QueryAnalysis,
    q2: QueryAnalysis,
    db: WordNetDb,
    wup: Optional[WupFn] = None,
    bonus_cutoff: int = DEFAULT_BONUS_CUTOFF,
    bonus_value: float = DEFAULT_BONUS_VALUE,
    with_jaccard: bool = False,
) -> PairScore:
    """Score one query pair; symmetric in its arguments.

    Either side being a URL query or carrying a cardinal number forces a
    total of exactly zero.  Arguments are canonicalized to ascending
    query-id order before scoring, which makes the float result exactly
    symmetric.
    """
    if q1.query_id == q2.query_id:
        raise ValueError("semantic_similarity needs two distinct query ids")
    if q1.query_id > q2.query_id:
        q1, q2 = q2, q1
    jaccard = jaccard_similarity(q1, q2) if with_jaccard else None
    if q1.is_url_query or q2.is_url_query or q1.has_cardinal or q2.has_cardinal:
        return PairScore(q1.query_id, q2.query_id, 0.0, 0.0, 0.0, jaccard)
    if wup is None:
        wup = db.wup_similarity
    noun_weight = bucket_pair_weight(
        q1.noun_words, q2.noun_words, q1.first_synset, q2.first_synset,
        wup, bonus_cutoff, bonus_value,
    )
    verb_weight = bucket_pair_weight(
        q1.verb_words, q2.verb_words, q1.first_synset, q2.first_synset,
        wup, bonus_cutoff, bonus_value,
    )
    return PairScore(
        q1.query_id, q2.query_id, noun_weight, verb_weight,
        noun_weight + verb_weight, jaccard,
    )


def jaccard_similarity(q1: QueryAnalysis, q2: QueryAnalysis) -> float:
    """Token-set overlap |T1 ∩ T2| / |T1 ∪ T2|; 0.0 when both sets are empty."""
    t1 = {word for word, _ in q1.tokens}
    t2 = {word for word, _ in q2.tokens}
    union = t1 | t2
    if not union:
        return 0.0
    return len(t1 & t2) / len(union)
