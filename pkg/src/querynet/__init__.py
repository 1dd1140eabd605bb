"""Semantic-relatedness graphs from raw web-search query logs.

The package turns a plain-text query log into a weighted graph: queries
are tokenized and part-of-speech bucketed against a WordNet-format
database, every unordered pair is scored by taxonomy similarity of
first senses plus a small spelling bonus, and pairs above a threshold
become edges.  Graph analysis (degree, betweenness centrality,
clustering) and exports (GEXF, DOT, adjacency CSV, JSON report) sit on
top, with a score cache and a scikit-learn style estimator wrapper.
"""

from .errors import (
    DataError,
    LoadError,
    ParseError,
    QuerynetError,
    StaleCacheError,
)
from .estimator import QueryGraphBuilder
from .graph import (
    Clustering,
    NodeMetrics,
    QueryGraph,
    betweenness_centrality,
    build_graph,
    clusters,
    modularity_of,
    node_metrics,
    top_k_subgraph,
)
from .pipeline import (
    RunConfig,
    ScoreTable,
    export_adjacency_csv,
    export_dot,
    export_gexf,
    export_report_json,
    load_queries,
    prepare_queries,
    read_edge_cache,
    run_build,
    score_all_pairs,
    write_edge_cache,
)
from .similarity import (
    PairScore,
    edit_distance,
    jaccard_similarity,
    semantic_similarity,
)
from .textprep import QueryAnalysis, analyze_query, is_cardinal, is_url, normalize
from .wordnet import WordNetDb, load_wordnet

__version__ = "0.1.0"

__all__ = [
    "Clustering",
    "DataError",
    "LoadError",
    "NodeMetrics",
    "PairScore",
    "ParseError",
    "QueryAnalysis",
    "QueryGraph",
    "QueryGraphBuilder",
    "QuerynetError",
    "RunConfig",
    "ScoreTable",
    "StaleCacheError",
    "WordNetDb",
    "analyze_query",
    "betweenness_centrality",
    "build_graph",
    "clusters",
    "edit_distance",
    "export_adjacency_csv",
    "export_dot",
    "export_gexf",
    "export_report_json",
    "is_cardinal",
    "is_url",
    "jaccard_similarity",
    "load_queries",
    "load_wordnet",
    "modularity_of",
    "node_metrics",
    "normalize",
    "prepare_queries",
    "read_edge_cache",
    "run_build",
    "score_all_pairs",
    "semantic_similarity",
    "top_k_subgraph",
    "write_edge_cache",
]
