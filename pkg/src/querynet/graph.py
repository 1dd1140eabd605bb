"""Thresholded relatedness graph and its analysis quantities.

Nodes are queries, edges carry the pairwise relatedness that cleared the
build threshold.  The module computes degree and weighted degree,
betweenness centrality over unweighted shortest paths (exact rational
accumulation, reported as floats), connected components, deterministic
greedy modularity clustering, and top-k induced subgraphs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, Optional, Sequence, Tuple

from .errors import DataError

CLUSTER_METHODS = ("components", "modularity")


@dataclass(frozen=True)
class QueryGraph:
    """Immutable undirected graph; nodes carry query texts, edges weights."""

    nodes: Tuple[Tuple[int, str], ...]
    edges: Tuple[Tuple[int, int, float], ...]

    @cached_property
    def adjacency(self) -> Dict[int, Tuple[Tuple[int, float], ...]]:
        """Per-node neighbor list as ``(neighbor, weight)``, sorted."""
        lists: Dict[int, list] = {node_id: [] for node_id, _ in self.nodes}
        for a, b, w in self.edges:
            lists[a].append((b, w))
            lists[b].append((a, w))
        return {v: tuple(sorted(nbrs)) for v, nbrs in lists.items()}

    @cached_property
    def texts(self) -> Dict[int, str]:
        return dict(self.nodes)

    @property
    def node_ids(self) -> Tuple[int, ...]:
        return tuple(node_id for node_id, _ in self.nodes)


@dataclass(frozen=True)
class NodeMetrics:
    """Per-node analysis maps; betweenness is filled in separately."""

    degree: Dict[int, int]
    weighted_degree: Dict[int, float]
    betweenness: Optional[Dict[int, float]] = None


@dataclass(frozen=True)
class Clustering:
    """A partition of the graph's nodes into dense 0-based cluster ids."""

    assignment: Dict[int, int]
    method: str
    modularity_score: Optional[float] = None


def build_graph(
    scores: Iterable,
    threshold: float,
    nodes: Optional[Iterable[Tuple[int, str]]] = None,
) -> QueryGraph:
    """Keep edges whose weight is strictly above ``threshold``.

    ``scores`` items are PairScore-like objects (``.a``, ``.b``,
    ``.total``) or ``(a, b, weight)`` tuples.  Every id seen in the
    scores becomes a node, so isolates survive thresholding.  A node
    list of ``(id, text)`` pairs may be supplied to attach texts and to
    include nodes that appear in no pair.
    """
    if threshold < 0:
        raise ValueError(f"threshold must be non-negative, got {threshold}")
    seen: set = set()
    edges = []
    ids = set()
    for item in scores:
        if hasattr(item, "total"):
            a, b, weight = item.a, item.b, item.total
        else:
            a, b, weight = item[0], item[1], item[2]
        if a == b:
            raise DataError(f"self-pair ({a}, {b}) in scores")
        if a > b:
            a, b = b, a
        if (a, b) in seen:
            raise DataError(f"duplicate pair ({a}, {b}) in scores")
        seen.add((a, b))
        ids.add(a)
        ids.add(b)
        if weight > threshold:
            edges.append((a, b, weight))
    if nodes is not None:
        node_list = sorted((int(i), t) for i, t in nodes)
        known = {i for i, _ in node_list}
        missing = ids - known
        if missing:
            raise DataError(f"scores reference unknown node ids {sorted(missing)}")
    else:
        node_list = [(i, str(i)) for i in sorted(ids)]
    return QueryGraph(nodes=tuple(node_list), edges=tuple(sorted(edges)))


def node_metrics(g: QueryGraph) -> NodeMetrics:
    """Degree and weighted degree for every node (isolates get zero)."""
    degree = {v: 0 for v in g.node_ids}
    weighted = {v: 0.0 for v in g.node_ids}
    for a, b, w in g.edges:
        degree[a] += 1
        degree[b] += 1
        weighted[a] += w
        weighted[b] += w
    return NodeMetrics(degree=degree, weighted_degree=weighted)


def betweenness_centrality(
    g: QueryGraph, normalized: bool = False
) -> Dict[int, float]:
    """Betweenness over unweighted shortest paths, endpoints excluded.

    Each unordered source-target pair is counted once (the directed
    accumulation is halved).  Accumulation uses exact rational
    arithmetic, so results equal path-enumeration values exactly; the
    optional normalization divides by (n-1)(n-2)/2.
    """
    ids = list(g.node_ids)
    adjacency = {v: tuple(nb for nb, _ in g.adjacency[v]) for v in ids}
    accumulated = {v: Fraction(0) for v in ids}
    for source in ids:
        stack: list = []
        predecessors: Dict[int, list] = {}
        sigma = {source: 1}
        dist = {source: 0}
        queue = deque([source])
        while queue:
            v = queue.popleft()
            stack.append(v)
            next_dist = dist[v] + 1
            for w in adjacency[v]:
                if w not in dist:
                    dist[w] = next_dist
                    sigma[w] = 0
                    predecessors[w] = []
                    queue.append(w)
                if dist[w] == next_dist:
                    sigma[w] += sigma[v]
                    predecessors[w].append(v)
        delta = {v: Fraction(0) for v in stack}
        for w in reversed(stack):
            coefficient = (1 + delta[w]) / sigma[w]
            for v in predecessors.get(w, ()):
                delta[v] += sigma[v] * coefficient
            if w != source:
                accumulated[w] += delta[w]
    n = len(ids)
    scale = Fraction((n - 1) * (n - 2), 2) if normalized and n > 2 else None
    out = {}
    for v in ids:
        value = accumulated[v] / 2
        if scale is not None:
            value /= scale
        out[v] = float(value)
    return out


def clusters(g: QueryGraph, method: str = "modularity") -> Clustering:
    """Partition the graph by connected components or greedy modularity."""
    if method not in CLUSTER_METHODS:
        raise ValueError(
            f"unknown cluster method {method!r}; expected one of {CLUSTER_METHODS}"
        )
    if method == "components":
        assignment = _connected_components(g)
        return Clustering(assignment=assignment, method=method)
    assignment = _greedy_modularity(g)
    return Clustering(
        assignment=assignment,
        method=method,
        modularity_score=modularity_of(g, assignment),
    )


def modularity_of(g: QueryGraph, assignment: Dict[int, int]) -> float:
    """Q = Σ_c (w_in(c)/W − (w_tot(c)/2W)²) over the partition; 0 when edgeless."""
    total_weight = 0.0
    for _, _, w in g.edges:
        total_weight += w
    if total_weight == 0.0:
        return 0.0
    w_in: Dict[int, float] = {}
    w_tot: Dict[int, float] = {}
    for a, b, w in g.edges:
        ca, cb = assignment[a], assignment[b]
        if ca == cb:
            w_in[ca] = w_in.get(ca, 0.0) + w
        w_tot[ca] = w_tot.get(ca, 0.0) + w
        w_tot[cb] = w_tot.get(cb, 0.0) + w
    q = 0.0
    for c in sorted(set(assignment.values())):
        share = w_tot.get(c, 0.0) / (2.0 * total_weight)
        q += w_in.get(c, 0.0) / total_weight - share * share
    return q


def top_k_subgraph(
    g: QueryGraph, metrics: NodeMetrics, key: str, k: int
) -> QueryGraph:
    """Induced subgraph on the k best nodes by ``degree`` or ``betweenness``.

    Ties prefer the smaller query id; ``k`` beyond the node count returns
    the whole graph.
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if key == "degree":
        values = metrics.degree
    elif key == "betweenness":
        if metrics.betweenness is None:
            raise ValueError("betweenness has not been computed for this graph")
        values = metrics.betweenness
    else:
        raise ValueError(f"unknown ranking key {key!r}")
    if k >= len(g.nodes):
        return g
    ranked = sorted(g.node_ids, key=lambda v: (-values[v], v))
    kept = set(ranked[:k])
    nodes = tuple((i, t) for i, t in g.nodes if i in kept)
    edges = tuple((a, b, w) for a, b, w in g.edges if a in kept and b in kept)
    return QueryGraph(nodes=nodes, edges=edges)


def _connected_components(g: QueryGraph) -> Dict[int, int]:
    assignment: Dict[int, int] = {}
    next_cluster = 0
    for start in g.node_ids:  # ascending id order labels by smallest member
        if start in assignment:
            continue
        assignment[start] = next_cluster
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w, _ in g.adjacency[v]:
                if w not in assignment:
                    assignment[w] = next_cluster
                    queue.append(w)
        next_cluster += 1
    return assignment


def _greedy_modularity(g: QueryGraph) -> Dict[int, int]:
    """Agglomerative modularity maximization over edge weights.

    Starts from singletons; each step merges the connected community
    pair with the largest gain ΔQ = e_ij/W − w_i·w_j/(2W²), breaking
    exact ties toward the lexicographically smallest (min id, max id)
    community pair; stops when no merge gains.  Community ids equal
    their smallest member throughout, then get densely relabeled.
    """
    ids = list(g.node_ids)
    total_weight = 0.0
    for _, _, w in g.edges:
        total_weight += w
    members = {v: {v} for v in ids}
    if total_weight > 0.0:
        w_tot = {v: 0.0 for v in ids}
        between: Dict[Tuple[int, int], float] = {}
        for a, b, w in g.edges:
            w_tot[a] += w
            w_tot[b] += w
            between[(a, b)] = between.get((a, b), 0.0) + w
        two_w_sq = 2.0 * total_weight * total_weight
        while True:
            best_gain = 0.0
            best_pair = None
            # Ascending pair order makes the first maximum the
            # lexicographically smallest among exact ties.
            for pair in sorted(between):
                ci, cj = pair
                gain = between[pair] / total_weight - (w_tot[ci] * w_tot[cj]) / two_w_sq
                if gain > best_gain:
                    best_gain = gain
                    best_pair = pair
            if best_pair is None:
                break
            ci, cj = best_pair  # ci < cj; the merged community keeps id ci
            members[ci] |= members.pop(cj)
            w_tot[ci] += w_tot.pop(cj)
            merged_neighbors: Dict[int, float] = {}
            for pair in [p for p in between if ci in p or cj in p]:
                weight = between.pop(pair)
                other = pair[0] if pair[1] in (ci, cj) else pair[1]
                if other in (ci, cj):
                    continue  # the edge being contracted
                merged_neighbors[other] = merged_neighbors.get(other, 0.0) + weight
            for other, weight in merged_neighbors.items():
                key = (ci, other) if ci < other else (other, ci)
                between[key] = weight
    assignment: Dict[int, int] = {}
    for cluster, community in enumerate(sorted(members)):
        for v in members[community]:
            assignment[v] = cluster
    return assignment
