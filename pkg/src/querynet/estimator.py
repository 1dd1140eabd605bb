"""Scikit-learn style wrapper around the query-graph pipeline.

``QueryGraphBuilder`` is a standard estimator: construct it with
hyper-parameters only, call :meth:`fit` with a sequence of raw query
strings, then read the fitted artifacts (``graph_``, ``metrics_``,
``clustering_``, ``similarity_matrix_``).  :meth:`transform` scores new
queries against the fitted corpus, returning a dense similarity matrix
with one column per fitted query.
"""

from __future__ import annotations

from typing import List, Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .errors import DataError
from .graph import QueryGraph, build_graph
from .pipeline import (
    RunConfig,
    ScoreTable,
    analyze_graph,
    prepare_queries,
    score_all_pairs,
)
from .similarity import (
    DEFAULT_BONUS_CUTOFF,
    DEFAULT_BONUS_VALUE,
    semantic_similarity,
)
from .textprep import analyze_query
from .wordnet import WordNetDb, load_wordnet


def _validate_queries(X) -> List[str]:
    """Check that X is a non-empty sequence of strings and listify it."""
    if isinstance(X, str):
        raise ValueError("X must be a sequence of query strings, not a single string")
    try:
        items = list(X)
    except TypeError as exc:
        raise ValueError(f"X must be an iterable of query strings: {exc}") from exc
    if not items:
        raise ValueError("X must contain at least one query")
    for item in items:
        if not isinstance(item, str):
            raise ValueError(
                f"every query must be a string, got {type(item).__name__}: {item!r}"
            )
    return items


class QueryGraphBuilder(BaseEstimator):
    """Build a semantic-relatedness graph from raw query strings.

    Parameters mirror :class:`querynet.pipeline.RunConfig`.  ``workers``
    defaults to ``None`` meaning "one per CPU"; results are identical
    for any worker count.

    Fitted attributes
    -----------------
    queries_ : list[str]
        Surviving normalized queries, in input order (duplicates and
        single-token URLs are dropped).
    analyses_ : list[QueryAnalysis]
        Token/POS analysis for each fitted query.
    scores_ : ScoreTable
        All unordered pair scores, sorted by (a, b).
    similarity_matrix_ : numpy.ndarray
        Square symmetric matrix of pair totals with a zero diagonal.
    graph_, metrics_, clustering_
        Thresholded graph, per-node metrics (with betweenness), and the
        cluster assignment.
    """

    def __init__(
        self,
        wordnet_dir: Optional[str] = None,
        threshold: float = 0.4,
        bonus_cutoff: int = DEFAULT_BONUS_CUTOFF,
        bonus_value: float = DEFAULT_BONUS_VALUE,
        workers: Optional[int] = None,
        cluster_method: str = "modularity",
        normalize_betweenness: bool = False,
    ) -> None:
        self.wordnet_dir = wordnet_dir
        self.threshold = threshold
        self.bonus_cutoff = bonus_cutoff
        self.bonus_value = bonus_value
        self.workers = workers
        self.cluster_method = cluster_method
        self.normalize_betweenness = normalize_betweenness

    # -- configuration -----------------------------------------------------

    def _config(self) -> RunConfig:
        """Validate hyper-parameters by materializing a RunConfig."""
        kwargs = dict(
            wordnet_dir=self.wordnet_dir,
            threshold=self.threshold,
            bonus_cutoff=self.bonus_cutoff,
            bonus_value=self.bonus_value,
            cluster_method=self.cluster_method,
            normalize_betweenness=self.normalize_betweenness,
        )
        if self.workers is not None:
            kwargs["workers"] = self.workers
        return RunConfig(**kwargs)

    def _database(self) -> WordNetDb:
        if self.wordnet_dir is None:
            raise ValueError(
                "wordnet_dir is required: point it at a directory holding "
                "WordNet-format data.pos/index.pos files"
            )
        return load_wordnet(self.wordnet_dir)

    # -- estimator API -----------------------------------------------------

    def fit(self, X: Sequence[str], y=None) -> "QueryGraphBuilder":
        """Analyze, score, and graph a corpus of raw query strings."""
        config = self._config()
        queries = _validate_queries(X)
        db = self._database()
        analyses = prepare_queries(queries, db)
        if len(analyses) < 2:
            raise ValueError(
                "need at least two distinct non-URL queries to build a graph, "
                f"got {len(analyses)}"
            )
        scores = score_all_pairs(analyses, config, db)
        graph = self._graph_from(scores, analyses, config)
        metrics, clustering = analyze_graph(graph, config)

        self.db_ = db
        self.analyses_ = analyses
        self.queries_ = [a.normalized for a in analyses]
        self.scores_ = scores
        self.similarity_matrix_ = self._square_matrix(scores, len(analyses))
        self.graph_ = graph
        self.metrics_ = metrics
        self.clustering_ = clustering
        return self

    def transform(self, X: Sequence[str]) -> np.ndarray:
        """Score each query in X against every fitted query.

        Returns an array of shape ``(len(X), len(self.queries_))``
        holding pair totals.  New queries are normalized but not
        deduplicated; URL and number guards apply as in fitting.
        """
        check_is_fitted(self, "analyses_")
        config = self._config()
        queries = _validate_queries(X)
        n = len(self.analyses_)
        out = np.zeros((len(queries), n), dtype=np.float64)
        for row, raw in enumerate(queries):
            try:
                probe = analyze_query(raw, self.db_, n + row)
            except DataError as exc:
                raise ValueError(f"X[{row}]: {exc}") from exc
            for col, fitted in enumerate(self.analyses_):
                score = semantic_similarity(
                    fitted,
                    probe,
                    self.db_,
                    bonus_cutoff=config.bonus_cutoff,
                    bonus_value=config.bonus_value,
                )
                out[row, col] = score.total
        return out

    # -- helpers -------------------------------------------------------

    def _graph_from(self, scores: ScoreTable, analyses, config: RunConfig) -> QueryGraph:
        nodes = [(a.query_id, a.normalized) for a in analyses]
        return build_graph(scores, config.threshold, nodes=nodes)

    @staticmethod
    def _square_matrix(scores: ScoreTable, n: int) -> np.ndarray:
        matrix = np.zeros((n, n), dtype=np.float64)
        matrix[scores.a, scores.b] = scores.total
        matrix[scores.b, scores.a] = scores.total
        return matrix
