"""Command-line interface.

Subcommands
-----------
build    Score a query log and write every artifact to an output directory.
sim      Score one query pair and print its components.
metrics  Print the JSON report for a cached score table.
cluster  Print the cluster assignment for a cached score table.
export   Render a cached score table as GEXF, DOT, or an adjacency matrix.

Exit codes: 0 success, 1 usage error, 2 malformed or stale data,
3 file-system error.  The WordNet directory may come from the
``QUERYNET_WORDNET_DIR`` environment variable instead of
``--wordnet-dir``.
"""

from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path
from typing import Optional

import click

from .errors import DataError
from .graph import CLUSTER_METHODS, top_k_subgraph
from .pipeline import (
    RunConfig,
    analyze_graph,
    export_adjacency_csv,
    export_dot,
    export_gexf,
    export_report_json,
    graph_from_cache,
    read_edge_cache,
    run_build,
)
from .similarity import semantic_similarity
from .textprep import analyze_query
from .wordnet import load_wordnet

WORDNET_ENV = "QUERYNET_WORDNET_DIR"

_wordnet_option = click.option(
    "--wordnet-dir",
    envvar=WORDNET_ENV,
    type=click.Path(file_okay=False),
    default=None,
    help=f"WordNet data directory (or set {WORDNET_ENV}).",
)


def _require_wordnet_dir(wordnet_dir: Optional[str]) -> str:
    if not wordnet_dir:
        raise click.UsageError(
            f"a WordNet directory is required: pass --wordnet-dir or set {WORDNET_ENV}"
        )
    return wordnet_dir


@click.group(name="querynet")
@click.version_option(package_name="querynet", prog_name="querynet")
def cli() -> None:
    """Build semantic-relatedness graphs from web-search query logs."""


@cli.command()
@click.option("--input", "input_path", required=True, type=click.Path(dir_okay=False))
@_wordnet_option
@click.option("--threshold", type=float, default=0.4, show_default=True)
@click.option("--workers", type=int, default=None, help="Defaults to one per CPU.")
@click.option(
    "--cache",
    "cache_path",
    type=click.Path(dir_okay=False),
    default=None,
    help="Score cache location; reused when fresh. [default: OUT_DIR/cache.csv]",
)
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
def build(input_path, wordnet_dir, threshold, workers, cache_path, out_dir):
    """Score a query log and write graph, matrix, and report files."""
    kwargs = dict(
        wordnet_dir=_require_wordnet_dir(wordnet_dir), threshold=threshold
    )
    if workers is not None:
        kwargs["workers"] = workers
    config = RunConfig(**kwargs)
    summary = run_build(input_path, config, out_dir, cache_path=cache_path)
    for key in ("queries", "pairs", "nodes", "edges", "clusters"):
        click.echo(f"{key}: {summary[key]}")
    for name, path in summary["paths"].items():
        click.echo(f"{name}: {path}")


@cli.command()
@click.argument("query1")
@click.argument("query2")
@_wordnet_option
def sim(query1, query2, wordnet_dir):
    """Print the relatedness components for one pair of queries."""
    db = load_wordnet(_require_wordnet_dir(wordnet_dir))
    q1 = analyze_query(query1, db, 0)
    q2 = analyze_query(query2, db, 1)
    score = semantic_similarity(q1, q2, db, with_jaccard=True)
    click.echo(f"noun_weight: {score.noun_weight:.9f}")
    click.echo(f"verb_weight: {score.verb_weight:.9f}")
    click.echo(f"total: {score.total:.9f}")
    click.echo(f"jaccard: {score.jaccard:.9f}")


def _load_graph(cache_path: str, threshold: float, config: RunConfig):
    cache = read_edge_cache(cache_path)
    g = graph_from_cache(cache, threshold)
    metrics, clustering = analyze_graph(g, config)
    return g, metrics, clustering


@cli.command()
@click.option("--cache", "cache_path", required=True, type=click.Path(dir_okay=False))
@click.option("--threshold", type=float, default=0.4, show_default=True)
@click.option("--normalize-betweenness", is_flag=True, default=False)
def metrics(cache_path, threshold, normalize_betweenness):
    """Print the full JSON report for a cached score table."""
    config = RunConfig(
        threshold=threshold, normalize_betweenness=normalize_betweenness
    )
    g, node_stats, clustering = _load_graph(cache_path, threshold, config)
    report = export_report_json(g, node_stats, clustering, config)
    click.echo(json.dumps(report, indent=2, ensure_ascii=False))


@cli.command()
@click.option("--cache", "cache_path", required=True, type=click.Path(dir_okay=False))
@click.option("--threshold", type=float, default=0.4, show_default=True)
@click.option(
    "--method",
    type=click.Choice(CLUSTER_METHODS),
    default="modularity",
    show_default=True,
)
def cluster(cache_path, threshold, method):
    """Print the cluster assignment for a cached score table."""
    config = RunConfig(threshold=threshold, cluster_method=method)
    g, node_stats, clustering = _load_graph(cache_path, threshold, config)
    report = export_report_json(g, node_stats, clustering, config)
    click.echo(
        json.dumps(
            {
                "method": clustering.method,
                "modularity": clustering.modularity_score,
                "cluster_count": len(report["clusters"]),
                "clusters": report["clusters"],
            },
            indent=2,
            ensure_ascii=False,
        )
    )


@cli.command()
@click.option("--cache", "cache_path", required=True, type=click.Path(dir_okay=False))
@click.option("--threshold", type=float, default=0.4, show_default=True)
@click.option(
    "--format",
    "fmt",
    required=True,
    type=click.Choice(("gexf", "dot", "adjacency")),
)
@click.option("--top-k", type=int, default=None, help="Keep only the k best nodes.")
@click.option(
    "--by",
    "rank_key",
    type=click.Choice(("betweenness", "degree")),
    default="betweenness",
    show_default=True,
    help="Ranking used with --top-k.",
)
@click.option(
    "--out",
    "out_path",
    type=click.Path(dir_okay=False),
    default=None,
    help="Output file. [default: stdout]",
)
def export(cache_path, threshold, fmt, top_k, rank_key, out_path):
    """Render a cached score table in a graph file format."""
    config = RunConfig(threshold=threshold, top_k=top_k)
    g, node_stats, clustering = _load_graph(cache_path, threshold, config)
    if top_k is not None:
        g = top_k_subgraph(g, node_stats, rank_key, top_k)
        # Metrics and visual scales are relative to the exported graph.
        node_stats, clustering = analyze_graph(g, config)

    def render(target: Path) -> None:
        if fmt == "gexf":
            export_gexf(g, node_stats, clustering, config, target)
        elif fmt == "dot":
            export_dot(g, node_stats, clustering, config, target)
        else:
            export_adjacency_csv(g, target)

    if out_path is not None:
        render(Path(out_path))
        return
    with tempfile.NamedTemporaryFile(
        mode="w+", suffix=f".{fmt}", encoding="utf-8", delete=True
    ) as handle:
        render(Path(handle.name))
        handle.seek(0)
        click.echo(handle.read(), nl=False)


def main(argv: Optional[list] = None) -> int:
    """Entry point mapping exceptions onto documented exit codes."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except DataError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
