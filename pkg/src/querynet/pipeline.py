"""End-to-end orchestration: ingest, score, cache, analyze, export.

The scoring engine precomputes per-bucket similarity and bonus tables
over the deduplicated word vocabulary, then walks every unordered query
pair in (a, b) order.  Workers split the pair range; each pair's
accumulation replicates the per-pair statement order of the naive
scorer, so results are bit-identical for any worker count and identical
to scoring pairs one at a time.

Artifacts: a sorted CSV score cache with integrity digests and the
query list embedded, GEXF/DOT graph exports carrying the visual
encodings (node size from degree, green-to-red color from betweenness,
edge thickness from weight), a square adjacency-matrix CSV, and a JSON
report of clusters and top central nodes.
"""

from __future__ import annotations

import csv
import hashlib
import json
import multiprocessing
import os
import re
from collections import abc
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DataError, ParseError, StaleCacheError
from .graph import (
    CLUSTER_METHODS,
    Clustering,
    NodeMetrics,
    QueryGraph,
    betweenness_centrality,
    build_graph,
    clusters,
    node_metrics,
)
from .similarity import (
    DEFAULT_BONUS_CUTOFF,
    DEFAULT_BONUS_VALUE,
    PairScore,
    edit_distance,
)
from .textprep import QueryAnalysis, analyze_query, is_url, normalize
from .wordnet import WordNetDb, load_wordnet

CACHE_FORMAT = "querynet-cache/1"
CACHE_HEADER = "a,b,noun_weight,verb_weight,total"

# Optional trailing count column in query logs: an integer or decimal.
_TRAILING_NUMERIC = re.compile(r"\d+(?:\.\d+)?")


def _default_workers() -> int:
    return os.cpu_count() or 1


@dataclass(frozen=True)
class RunConfig:
    """Knobs for a full run; every default is a documented choice."""

    wordnet_dir: Optional[str] = None
    threshold: float = 0.4
    bonus_cutoff: int = DEFAULT_BONUS_CUTOFF
    bonus_value: float = DEFAULT_BONUS_VALUE
    workers: int = field(default_factory=_default_workers)
    cluster_method: str = "modularity"
    normalize_betweenness: bool = False
    size_range: Tuple[float, float] = (10.0, 50.0)
    edge_width_range: Tuple[float, float] = (1.0, 10.0)
    top_k: Optional[int] = None

    def __post_init__(self) -> None:
        if self.threshold < 0:
            raise ValueError(f"threshold must be non-negative, got {self.threshold}")
        if self.bonus_cutoff < 0:
            raise ValueError(f"bonus_cutoff must be non-negative, got {self.bonus_cutoff}")
        if self.bonus_value < 0:
            raise ValueError(f"bonus_value must be non-negative, got {self.bonus_value}")
        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")
        if self.cluster_method not in CLUSTER_METHODS:
            raise ValueError(f"unknown cluster method {self.cluster_method!r}")
        for name in ("size_range", "edge_width_range"):
            lo, hi = getattr(self, name)
            if not lo < hi:
                raise ValueError(f"{name} must have min < max, got ({lo}, {hi})")
        if self.top_k is not None and self.top_k < 1:
            raise ValueError(f"top_k must be at least 1, got {self.top_k}")

    def echo(self) -> Dict[str, object]:
        """Result-affecting parameters for the report (worker count is
        scheduling-only and deliberately excluded so outputs stay
        byte-identical across worker counts)."""
        return {
            "wordnet_dir": self.wordnet_dir,
            "threshold": self.threshold,
            "bonus_cutoff": self.bonus_cutoff,
            "bonus_value": self.bonus_value,
            "cluster_method": self.cluster_method,
            "normalize_betweenness": self.normalize_betweenness,
            "size_range": list(self.size_range),
            "edge_width_range": list(self.edge_width_range),
            "top_k": self.top_k,
        }


# ---------------------------------------------------------------------------
# Ingestion
# ---------------------------------------------------------------------------


def prepare_queries(
    lines: abc.Iterable[str], db: WordNetDb
) -> List[QueryAnalysis]:
    """Normalize raw query lines, dedup, drop single-token URLs.

    A trailing tab-separated numeric field (a count column) is stripped
    when present.  Queries containing cardinal numbers are kept — the
    scorer zeroes them.  Ids are assigned in input order over survivors.
    """
    analyses: List[QueryAnalysis] = []
    seen = set()
    for line in lines:
        parts = line.split("\t")
        if len(parts) > 1 and _TRAILING_NUMERIC.fullmatch(parts[-1].strip()):
            line = "\t".join(parts[:-1])
        normalized = normalize(line)
        if not normalized or normalized in seen:
            continue
        seen.add(normalized)
        if is_url(normalized):
            continue
        analyses.append(analyze_query(normalized, db, len(analyses)))
    return analyses


def load_queries(path: Union[str, Path], db: WordNetDb) -> List[QueryAnalysis]:
    """Read one query per line and run the standard cleanup pipeline."""
    raw = Path(path).read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DataError(f"{path} is not UTF-8 text: {exc}") from exc
    analyses = prepare_queries(text.splitlines(), db)
    if not analyses:
        raise DataError(f"no usable queries in {path}")
    return analyses


# ---------------------------------------------------------------------------
# Score table
# ---------------------------------------------------------------------------


class ScoreTable(abc.Sequence):
    """All unordered pair scores, columnar, sorted by (a, b)."""

    def __init__(
        self,
        a: np.ndarray,
        b: np.ndarray,
        noun_weight: np.ndarray,
        verb_weight: np.ndarray,
        total: np.ndarray,
    ) -> None:
        lengths = {len(col) for col in (a, b, noun_weight, verb_weight, total)}
        if len(lengths) != 1:
            raise ValueError("score table columns must have equal length")
        self.a = a
        self.b = b
        self.noun_weight = noun_weight
        self.verb_weight = verb_weight
        self.total = total

    def __len__(self) -> int:
        return len(self.a)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return [self[i] for i in range(*index.indices(len(self)))]
        if index < 0:
            index += len(self)
        if not 0 <= index < len(self):
            raise IndexError(index)
        return PairScore(
            int(self.a[index]),
            int(self.b[index]),
            float(self.noun_weight[index]),
            float(self.verb_weight[index]),
            float(self.total[index]),
        )

    def __iter__(self) -> Iterator[PairScore]:
        for a, b, nw, vw, tw in zip(
            self.a.tolist(),
            self.b.tolist(),
            self.noun_weight.tolist(),
            self.verb_weight.tolist(),
            self.total.tolist(),
        ):
            yield PairScore(a, b, nw, vw, tw)

    def equals(self, other: "ScoreTable") -> bool:
        return (
            np.array_equal(self.a, other.a)
            and np.array_equal(self.b, other.b)
            and np.array_equal(self.noun_weight, other.noun_weight)
            and np.array_equal(self.verb_weight, other.verb_weight)
            and np.array_equal(self.total, other.total)
        )


def _pair_columns(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Id columns for all unordered pairs of 0..n-1 in (a, b) order."""
    if n < 2:
        empty = np.empty(0, dtype=np.int32)
        return empty, empty.copy()
    firsts = np.arange(n - 1, dtype=np.int32)
    a = np.repeat(firsts, n - 1 - firsts)
    b = np.concatenate([np.arange(x + 1, n, dtype=np.int32) for x in range(n - 1)])
    return a, b


# ---------------------------------------------------------------------------
# Scoring engine
# ---------------------------------------------------------------------------

# Immutable scoring state inherited by forked workers.
_ENGINE: Optional[dict] = None


def _build_engine_state(analyses: Sequence[QueryAnalysis], config: RunConfig, db: WordNetDb) -> dict:
    """Vocabulary tables + per-query index lists for the pair loop."""
    buckets = {}
    for bucket_name in ("noun", "verb"):
        vocab: Dict[str, int] = {}
        for analysis in analyses:
            words = analysis.noun_words if bucket_name == "noun" else analysis.verb_words
            for word in words:
                if word not in vocab:
                    vocab[word] = len(vocab)
        words = list(vocab)
        senses = [None] * len(words)
        for analysis in analyses:
            for word, sense in analysis.first_synset.items():
                if word in vocab:
                    senses[vocab[word]] = sense
        # Similarity over distinct first senses, memoized per unordered pair.
        sense_ids = sorted({s for s in senses if s is not None})
        sense_index = {s: k for k, s in enumerate(sense_ids)}
        sense_table = [[0.0] * len(sense_ids) for _ in sense_ids]
        for p, sp in enumerate(sense_ids):
            row = sense_table[p]
            row[p] = db.wup_similarity(sp, sp) or 0.0
            for q in range(p + 1, len(sense_ids)):
                value = db.wup_similarity(sp, sense_ids[q]) or 0.0
                row[q] = value
                sense_table[q][p] = value
        size = len(words)
        wup_rows: List[List[float]] = []
        bonus_rows: List[bytes] = []
        for i in range(size):
            si = senses[i]
            wrow = [0.0] * size
            brow = bytearray(size)
            if si is not None:
                srow = sense_table[sense_index[si]]
                wi = words[i]
                for j in range(size):
                    sj = senses[j]
                    if sj is None:
                        continue  # lookup failure skips the pair and its bonus
                    wrow[j] = srow[sense_index[sj]]
                    wj = words[j]
                    if abs(len(wi) - len(wj)) <= config.bonus_cutoff and (
                        edit_distance(wi, wj) <= config.bonus_cutoff
                    ):
                        brow[j] = 1
            wup_rows.append(wrow)
            bonus_rows.append(bytes(brow))
        buckets[bucket_name] = {
            "ids": [
                tuple(
                    vocab[w]
                    for w in (
                        analysis.noun_words
                        if bucket_name == "noun"
                        else analysis.verb_words
                    )
                )
                for analysis in analyses
            ],
            "wup": wup_rows,
            "bonus": bonus_rows,
        }
    return {
        "n": len(analyses),
        "guard": [a.is_url_query or a.has_cardinal for a in analyses],
        "noun": buckets["noun"],
        "verb": buckets["verb"],
        "bonus_value": config.bonus_value,
    }


def _bucket_weight(ids1, ids2, wup_rows, bonus_rows, bonus_value) -> float:
    """Table-driven accumulation in the naive scorer's statement order."""
    denominator = len(ids1) + len(ids2)
    acc = 0.0
    for i in ids1:
        row = wup_rows[i]
        brow = bonus_rows[i]
        for j in ids2:
            value = row[j]
            if value:
                acc += value / denominator
            if brow[j]:
                acc += bonus_value
    return acc


def _first_pair(n: int, index: int) -> Tuple[int, int]:
    """(a, b) of the pair at ``index`` in the (a, b)-sorted enumeration."""
    low, high = 0, n - 1
    while low < high:  # largest a with count-of-pairs-before-row-a <= index
        mid = (low + high + 1) // 2
        before = mid * (n - 1) - mid * (mid - 1) // 2
        if before <= index:
            low = mid
        else:
            high = mid - 1
    before = low * (n - 1) - low * (low - 1) // 2
    return low, low + 1 + (index - before)


def _score_range(bounds: Tuple[int, int]) -> Tuple[np.ndarray, np.ndarray]:
    """Noun/verb weight columns for pair indices [start, end)."""
    state = _ENGINE
    start, end = bounds
    n = state["n"]
    guard = state["guard"]
    noun_ids = state["noun"]["ids"]
    noun_wup = state["noun"]["wup"]
    noun_bonus = state["noun"]["bonus"]
    verb_ids = state["verb"]["ids"]
    verb_wup = state["verb"]["wup"]
    verb_bonus = state["verb"]["bonus"]
    bonus_value = state["bonus_value"]
    noun_col = np.zeros(end - start, dtype=np.float64)
    verb_col = np.zeros(end - start, dtype=np.float64)
    if end <= start:
        return noun_col, verb_col
    a, b = _first_pair(n, start)
    for k in range(end - start):
        if not (guard[a] or guard[b]):
            ids1 = noun_ids[a]
            ids2 = noun_ids[b]
            if ids1 and ids2:
                noun_col[k] = _bucket_weight(
                    ids1, ids2, noun_wup, noun_bonus, bonus_value
                )
            ids1 = verb_ids[a]
            ids2 = verb_ids[b]
            if ids1 and ids2:
                verb_col[k] = _bucket_weight(
                    ids1, ids2, verb_wup, verb_bonus, bonus_value
                )
        b += 1
        if b == n:
            a += 1
            b = a + 1
    return noun_col, verb_col


def score_all_pairs(
    analyses: Sequence[QueryAnalysis], config: RunConfig, db: WordNetDb
) -> ScoreTable:
    """Score every unordered query pair; byte-identical for any worker count."""
    n = len(analyses)
    if n < 2:
        raise ValueError("need at least two queries to score pairs")
    for position, analysis in enumerate(analyses):
        if analysis.query_id != position:
            raise ValueError(
                f"analysis at position {position} has query_id {analysis.query_id}"
            )
    global _ENGINE
    _ENGINE = _build_engine_state(analyses, config, db)
    total_pairs = n * (n - 1) // 2
    try:
        workers = min(config.workers, max(1, total_pairs))
        bounds = [
            (total_pairs * k // workers, total_pairs * (k + 1) // workers)
            for k in range(workers)
        ]
        if workers == 1:
            chunks = [_score_range(bounds[0])]
        else:
            context = multiprocessing.get_context("fork")
            with context.Pool(processes=workers) as pool:
                chunks = pool.map(_score_range, bounds)
    finally:
        _ENGINE = None
    noun_col = np.concatenate([c[0] for c in chunks])
    verb_col = np.concatenate([c[1] for c in chunks])
    a_col, b_col = _pair_columns(n)
    return ScoreTable(a_col, b_col, noun_col, verb_col, noun_col + verb_col)


# ---------------------------------------------------------------------------
# Score cache
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScoreCache:
    """A parsed cache file: header digests, embedded queries, scores."""

    version: str
    query_digest: str
    param_digest: str
    queries: Tuple[str, ...]
    scores: ScoreTable


def _query_digest(queries: Sequence[str]) -> str:
    return hashlib.sha256("\n".join(queries).encode("utf-8")).hexdigest()


def _param_digest(config: RunConfig) -> str:
    # The build threshold is applied after scoring, so it is deliberately
    # not part of the scoring-parameter digest.
    material = f"bonus_cutoff={config.bonus_cutoff}\nbonus_value={config.bonus_value!r}\n"
    return hashlib.sha256(material.encode("utf-8")).hexdigest()


def write_edge_cache(
    scores: Union[ScoreTable, Sequence[PairScore]],
    path: Union[str, Path],
    queries: Sequence[str],
    config: RunConfig,
) -> None:
    """Write the sorted score CSV with digests and the query list embedded."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(f"# format: {CACHE_FORMAT}\n")
        handle.write(f"# queries: sha256:{_query_digest(queries)}\n")
        handle.write(f"# params: sha256:{_param_digest(config)}\n")
        for query_id, text in enumerate(queries):
            handle.write(f"# query: {query_id} {text}\n")
        handle.write(CACHE_HEADER + "\n")
        if isinstance(scores, ScoreTable):
            rows = zip(
                scores.a.tolist(),
                scores.b.tolist(),
                scores.noun_weight.tolist(),
                scores.verb_weight.tolist(),
            )
        else:
            rows = ((s.a, s.b, s.noun_weight, s.verb_weight) for s in scores)
        handle.writelines(_format_row(a, b, nw, vw) for a, b, nw, vw in rows)


def _format_row(a: int, b: int, nw: float, vw: float) -> str:
    # The total column is the exact decimal sum of the two rounded
    # components, so the file stays internally consistent: rounding the
    # in-memory total instead could land up to 1.5e-9 away from the sum
    # of the rounded parts.
    nw_text = f"{nw:.9f}"
    vw_text = f"{vw:.9f}"
    total_units = int(nw_text.replace(".", "")) + int(vw_text.replace(".", ""))
    return f"{a},{b},{nw_text},{vw_text},{total_units // 10**9}.{total_units % 10**9:09d}\n"


def read_edge_cache(
    path: Union[str, Path],
    queries: Optional[Sequence[str]] = None,
    config: Optional[RunConfig] = None,
) -> ScoreCache:
    """Parse and validate a cache file.

    Supplying ``queries``/``config`` additionally checks the digests
    against the current run and raises ``StaleCacheError`` on mismatch.
    Rows must be complete (every unordered pair) or entirely absent;
    unsorted or malformed rows raise ``ParseError`` with the line
    number.
    """
    path = Path(path)
    where = str(path)
    with open(path, "r", encoding="utf-8", newline="") as handle:
        lines = handle.read().splitlines()
    if not lines or not lines[0].startswith("# format: "):
        raise ParseError(where, 1, "missing cache format line")
    version = lines[0][len("# format: "):]
    if version != CACHE_FORMAT:
        raise ParseError(where, 1, f"unsupported cache format {version!r}")
    if len(lines) < 3 or not lines[1].startswith("# queries: sha256:"):
        raise ParseError(where, 2, "missing query digest line")
    if not lines[2].startswith("# params: sha256:"):
        raise ParseError(where, 3, "missing parameter digest line")
    query_digest = lines[1][len("# queries: sha256:"):]
    param_digest = lines[2][len("# params: sha256:"):]
    embedded: List[str] = []
    line_no = 4
    index = 3
    while index < len(lines) and lines[index].startswith("# query: "):
        body = lines[index][len("# query: "):]
        id_part, _, text = body.partition(" ")
        try:
            query_id = int(id_part)
        except ValueError:
            raise ParseError(where, line_no, f"bad query id {id_part!r}") from None
        if query_id != len(embedded):
            raise ParseError(where, line_no, f"query ids out of order at {query_id}")
        embedded.append(text)
        index += 1
        line_no += 1
    if index >= len(lines) or lines[index] != CACHE_HEADER:
        raise ParseError(where, line_no, f"expected header {CACHE_HEADER!r}")
    if _query_digest(embedded) != query_digest:
        raise ParseError(where, 2, "embedded query list does not match its digest")
    if queries is not None and _query_digest(queries) != query_digest:
        raise StaleCacheError(
            f"{path} was built for a different query list; delete it or "
            "rerun the build to regenerate"
        )
    if config is not None and _param_digest(config) != param_digest:
        raise StaleCacheError(
            f"{path} was built with different scoring parameters; delete it "
            "or rerun the build to regenerate"
        )
    index += 1
    line_no += 1
    n = len(embedded)
    expected_rows = n * (n - 1) // 2
    row_lines = lines[index:]
    if row_lines and len(row_lines) != expected_rows:
        raise ParseError(
            where,
            line_no,
            f"expected {expected_rows} rows for {n} queries, found {len(row_lines)}",
        )
    count = len(row_lines)
    a_col = np.empty(count, dtype=np.int32)
    b_col = np.empty(count, dtype=np.int32)
    noun_col = np.empty(count, dtype=np.float64)
    verb_col = np.empty(count, dtype=np.float64)
    previous = (-1, -1)
    for k, line in enumerate(row_lines):
        fields = line.split(",")
        if len(fields) != 5:
            raise ParseError(where, line_no + k, f"expected 5 fields, got {len(fields)}")
        try:
            a, b = int(fields[0]), int(fields[1])
            nw, vw, tw = float(fields[2]), float(fields[3]), float(fields[4])
        except ValueError as exc:
            raise ParseError(where, line_no + k, f"bad row: {exc}") from None
        if not 0 <= a < b < n:
            raise ParseError(where, line_no + k, f"pair ({a}, {b}) out of range")
        if (a, b) <= previous:
            raise ParseError(where, line_no + k, f"rows not sorted at ({a}, {b})")
        if nw < 0 or vw < 0:
            raise ParseError(where, line_no + k, "negative weight")
        if abs(tw - (nw + vw)) > 1e-9:
            raise ParseError(where, line_no + k, "total does not equal noun + verb")
        previous = (a, b)
        a_col[k] = a
        b_col[k] = b
        noun_col[k] = nw
        verb_col[k] = vw
    table = ScoreTable(a_col, b_col, noun_col, verb_col, noun_col + verb_col)
    return ScoreCache(
        version=version,
        query_digest=query_digest,
        param_digest=param_digest,
        queries=tuple(embedded),
        scores=table,
    )


# ---------------------------------------------------------------------------
# Exports
# ---------------------------------------------------------------------------


def _scale(value: float, lo: float, hi: float, out_lo: float, out_hi: float) -> float:
    if hi == lo:
        return (out_lo + out_hi) / 2.0
    return out_lo + (value - lo) / (hi - lo) * (out_hi - out_lo)


def _unit_scale(value: float, lo: float, hi: float) -> float:
    if hi == lo:
        return 0.5
    return (value - lo) / (hi - lo)


def _color(t: float) -> Tuple[int, int, int]:
    """Linear green (low) to red (high) ramp."""
    return round(255 * t), round(255 * (1 - t)), 0


def _visuals(g: QueryGraph, metrics: NodeMetrics, config: RunConfig):
    """Per-node size/color and per-edge thickness under the config ranges."""
    degrees = metrics.degree
    betweenness = metrics.betweenness or {v: 0.0 for v in g.node_ids}
    deg_lo = min(degrees.values(), default=0)
    deg_hi = max(degrees.values(), default=0)
    bet_lo = min(betweenness.values(), default=0.0)
    bet_hi = max(betweenness.values(), default=0.0)
    sizes = {
        v: _scale(degrees[v], deg_lo, deg_hi, *config.size_range) for v in g.node_ids
    }
    colors = {v: _color(_unit_scale(betweenness[v], bet_lo, bet_hi)) for v in g.node_ids}
    weights = [w for _, _, w in g.edges]
    w_lo = min(weights, default=0.0)
    w_hi = max(weights, default=0.0)
    widths = {
        (a, b): _scale(w, w_lo, w_hi, *config.edge_width_range)
        for a, b, w in g.edges
    }
    return sizes, colors, widths


def _xml_attr(value: str) -> str:
    from xml.sax.saxutils import quoteattr

    return quoteattr(value)


def export_gexf(
    g: QueryGraph,
    metrics: NodeMetrics,
    clustering: Clustering,
    config: RunConfig,
    path: Union[str, Path],
) -> None:
    """GEXF 1.2 undirected graph with attributes and visual encodings."""
    betweenness = metrics.betweenness or {v: 0.0 for v in g.node_ids}
    sizes, colors, widths = _visuals(g, metrics, config)
    out: List[str] = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(
        '<gexf xmlns="http://www.gexf.net/1.2draft" '
        'xmlns:viz="http://www.gexf.net/1.2draft/viz" version="1.2">'
    )
    out.append('  <graph mode="static" defaultedgetype="undirected">')
    out.append('    <attributes class="node">')
    out.append('      <attribute id="0" title="degree" type="integer"/>')
    out.append('      <attribute id="1" title="weighted_degree" type="double"/>')
    out.append('      <attribute id="2" title="betweenness" type="double"/>')
    out.append('      <attribute id="3" title="cluster" type="integer"/>')
    out.append("    </attributes>")
    out.append("    <nodes>")
    for node_id, text in g.nodes:  # nodes are already in id order
        r, gr, bl = colors[node_id]
        out.append(f"      <node id=\"{node_id}\" label={_xml_attr(text)}>")
        out.append("        <attvalues>")
        out.append(f'          <attvalue for="0" value="{metrics.degree[node_id]}"/>')
        out.append(
            f'          <attvalue for="1" value="{metrics.weighted_degree[node_id]:.9f}"/>'
        )
        out.append(f'          <attvalue for="2" value="{betweenness[node_id]:.9f}"/>')
        out.append(
            f'          <attvalue for="3" value="{clustering.assignment[node_id]}"/>'
        )
        out.append("        </attvalues>")
        out.append(f'        <viz:size value="{sizes[node_id]:.9f}"/>')
        out.append(f'        <viz:color r="{r}" g="{gr}" b="{bl}"/>')
        out.append("      </node>")
    out.append("    </nodes>")
    out.append("    <edges>")
    for edge_id, (a, b, w) in enumerate(g.edges):  # edges sorted by (a, b)
        out.append(
            f'      <edge id="{edge_id}" source="{a}" target="{b}" weight="{w:.9f}">'
        )
        out.append(f'        <viz:thickness value="{widths[(a, b)]:.9f}"/>')
        out.append("      </edge>")
    out.append("    </edges>")
    out.append("  </graph>")
    out.append("</gexf>")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def _dot_quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(
    g: QueryGraph,
    metrics: NodeMetrics,
    clustering: Clustering,
    config: RunConfig,
    path: Union[str, Path],
) -> None:
    """DOT rendering of the same encodings: size, color ramp, penwidth."""
    sizes, colors, widths = _visuals(g, metrics, config)
    out: List[str] = []
    out.append("graph querynet {")
    out.append("  node [shape=circle style=filled];")
    for node_id, text in g.nodes:
        r, gr, bl = colors[node_id]
        width = sizes[node_id] / 25.0  # size range mapped into inches
        out.append(
            f"  {node_id} [label={_dot_quote(text)} width={width:.9f} "
            f'fillcolor="#{r:02x}{gr:02x}{bl:02x}" '
            f"cluster={clustering.assignment[node_id]}];"
        )
    for a, b, w in g.edges:
        out.append(
            f"  {a} -- {b} [weight={w:.9f} penwidth={widths[(a, b)]:.9f}];"
        )
    out.append("}")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def export_adjacency_csv(g: QueryGraph, path: Union[str, Path]) -> None:
    """Square matrix CSV: texts on the first row/column, zero diagonal."""
    ids = list(g.node_ids)
    position = {v: k for k, v in enumerate(ids)}
    size = len(ids)
    cells = [["0.000000000"] * size for _ in range(size)]
    for a, b, w in g.edges:
        formatted = f"{w:.9f}"
        cells[position[a]][position[b]] = formatted
        cells[position[b]][position[a]] = formatted
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        texts = [g.texts[v] for v in ids]
        writer.writerow([""] + texts)
        for k in range(size):
            writer.writerow([texts[k]] + cells[k])


def export_report_json(
    g: QueryGraph,
    metrics: NodeMetrics,
    clustering: Clustering,
    config: RunConfig,
    path: Optional[Union[str, Path]] = None,
) -> Dict[str, object]:
    """Machine-readable run summary; written to ``path`` when given."""
    betweenness = metrics.betweenness or {v: 0.0 for v in g.node_ids}
    cluster_members: Dict[int, List[int]] = {}
    for node_id in g.node_ids:
        cluster_members.setdefault(clustering.assignment[node_id], []).append(node_id)
    clusters_out = []
    for cluster_id in sorted(cluster_members):
        members = sorted(
            cluster_members[cluster_id],
            key=lambda v: (-metrics.degree[v], v),
        )
        clusters_out.append(
            {
                "id": cluster_id,
                "size": len(members),
                "members": [g.texts[v] for v in members],
            }
        )
    top = sorted(g.node_ids, key=lambda v: (-betweenness[v], v))[:10]
    report: Dict[str, object] = {
        "config": config.echo(),
        "node_count": len(g.nodes),
        "edge_count": len(g.edges),
        "cluster_method": clustering.method,
        "modularity": clustering.modularity_score,
        "clusters": clusters_out,
        "top_betweenness": [
            {"id": v, "query": g.texts[v], "betweenness": betweenness[v]} for v in top
        ],
    }
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            json.dump(report, handle, indent=2, ensure_ascii=False)
            handle.write("\n")
    return report


# ---------------------------------------------------------------------------
# Orchestration
# ---------------------------------------------------------------------------


def analyze_graph(
    g: QueryGraph, config: RunConfig
) -> Tuple[NodeMetrics, Clustering]:
    metrics = node_metrics(g)
    metrics = replace(
        metrics,
        betweenness=betweenness_centrality(
            g, normalized=config.normalize_betweenness
        ),
    )
    return metrics, clusters(g, config.cluster_method)


def graph_from_cache(cache: ScoreCache, threshold: float) -> QueryGraph:
    nodes = list(enumerate(cache.queries))
    return build_graph(cache.scores, threshold, nodes=nodes)


def run_build(
    input_path: Union[str, Path],
    config: RunConfig,
    out_dir: Union[str, Path],
    cache_path: Optional[Union[str, Path]] = None,
) -> Dict[str, object]:
    """Full pipeline: ingest, score (or reuse a valid cache), export.

    Scores always flow through the cache file — written, then read back —
    so a fresh run and a cache-reusing run build the graph from the same
    parsed values.
    """
    if config.wordnet_dir is None:
        raise ValueError("config.wordnet_dir is required for a build")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cache_file = Path(cache_path) if cache_path is not None else out_dir / "cache.csv"
    db = load_wordnet(config.wordnet_dir)
    analyses = load_queries(input_path, db)
    queries = [analysis.normalized for analysis in analyses]
    if not cache_file.exists():
        table = score_all_pairs(analyses, config, db)
        write_edge_cache(table, cache_file, queries, config)
    cache = read_edge_cache(cache_file, queries=queries, config=config)
    g = graph_from_cache(cache, config.threshold)
    metrics, clustering = analyze_graph(g, config)
    paths = {
        "cache": cache_file,
        "gexf": out_dir / "graph.gexf",
        "dot": out_dir / "graph.dot",
        "adjacency": out_dir / "adjacency.csv",
        "report": out_dir / "report.json",
    }
    export_gexf(g, metrics, clustering, config, paths["gexf"])
    export_dot(g, metrics, clustering, config, paths["dot"])
    export_adjacency_csv(g, paths["adjacency"])
    export_report_json(g, metrics, clustering, config, paths["report"])
    return {
        "queries": len(queries),
        "pairs": len(cache.scores),
        "nodes": len(g.nodes),
        "edges": len(g.edges),
        "clusters": len(set(clustering.assignment.values())),
        "paths": {k: str(v) for k, v in paths.items()},
    }
