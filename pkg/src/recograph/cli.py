"""Command-line interface.

Subcommands cover the full experiment loop: ``generate`` a synthetic
biased graph, ``crawl`` an oracle, run ``topology`` diagnostics, score a
labeled graph with ``detect``, chain everything with ``pipeline``, and
aggregate ROC files with ``report``.

Reproducibility contract: every run writes ``manifest.json`` (the fully
resolved configuration, stable JSON) into its output directory, and
``<subcommand> --manifest path`` re-executes it, producing byte-identical
files. One global ``--seed`` feeds all stages through
:func:`recograph.utils.stage_seed`, so individual stages can be replayed
in isolation. ``RECOGRAPH_THREADS`` caps worker threads (0 = one per CPU).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import detection, io, metrics, topology
from .crawl import DumpOracle, GraphOracle, crawl
from .datasets import ModelParams, build_biased_graph, generate_features
from .exceptions import CrawlInterrupted, InvalidParams, RecographError
from .graph import EdgeLabel, GraphBuilder, RecGraph
from .utils import stage_seed

LARGE_COMMUNITY_FRACTION = 0.01


def _out_dir(config) -> Path:
    out = Path(config["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_graph(config) -> RecGraph:
    return io.read_graph_tsv(config["graph"], names_path=config.get("names"))


def _histogram_sources(config, n_nodes: int):
    sample = config.get("sample", 0)
    if not sample:
        return topology.ALL
    return topology.Sample(size=sample, seed=stage_seed(config["seed"], "sample"))


def _write_histogram(histogram, path) -> None:
    rows = histogram.as_rows()
    distances = [d for d, _ in rows]
    counts = [c for _, c in rows]
    io.write_histogram_csv(
        distances,
        counts,
        path,
        unreachable=histogram.unreachable_pairs,
        sources=histogram.n_sources,
    )


def _apply_truth(graph: RecGraph, truth_path) -> RecGraph:
    """Override edge labels with those from a truth edge-list file."""
    truth = io.read_graph_tsv(truth_path)
    lookup = {
        (int(truth.src[i]), int(truth.dst[i])): EdgeLabel(int(truth.label_codes[i]))
        for i in range(truth.n_edges)
    }
    builder = GraphBuilder(
        graph.n_nodes, metadata=graph.metadata, node_names=graph.node_names
    )
    for i in range(graph.n_edges):
        key = (int(graph.src[i]), int(graph.dst[i]))
        label = lookup.get(key, EdgeLabel(int(graph.label_codes[i])))
        builder.add_edge(key[0], key[1], label, count=int(graph.weights[i]))
    return builder.freeze()


# ---- subcommand bodies (resolved-config dicts in, files out) -----------------


def run_generate(config) -> None:
    out = _out_dir(config)
    params = ModelParams(
        n=config["n"],
        k_official=config["k_r"],
        k_biased=config["k_b"],
        dim_official=config["d"],
        dim_hidden=config["d_hidden"],
        overlap=config["overlap"],
        seed=stage_seed(config["seed"], "features"),
    )
    features = generate_features(params)
    graph = build_biased_graph(params, features)
    params.to_file(out / "params.cfg")
    io.write_graph_tsv(graph, out / "graph.tsv")
    io.write_features_csv(features.official, features.hidden, out / "features.csv")
    io.write_manifest(config, out / "manifest.json")


def run_crawl(config) -> None:
    out = _out_dir(config)
    kind, _, locator = config["oracle"].partition(":")
    if kind == "file":
        oracle = DumpOracle(locator, names_path=config.get("oracle_names"))
        seed_item = config["seed_item"]
    elif kind == "synth":
        oracle = GraphOracle(build_biased_graph(ModelParams.from_file(locator)))
        try:
            seed_item = int(config["seed_item"])
        except ValueError:
            raise InvalidParams(
                "synth oracles index items by integer id, got "
                f"--seed-item {config['seed_item']!r}"
            ) from None
    else:
        raise InvalidParams(
            f"oracle must be file:<path> or synth:<config>, got {config['oracle']!r}"
        )

    def write_observation(observed):
        io.write_graph_tsv(
            observed.graph,
            out / "observation.tsv",
            names_path=out / "observation.names.tsv",
        )
        io.write_keyvalues(
            {
                "node_count": observed.node_count,
                "edge_count": observed.edge_count,
                "redundancy": io.format_float(observed.redundancy()),
                "frontier_sizes": " ".join(map(str, observed.frontier_sizes)),
            },
            out / "crawl_summary.txt",
        )
        io.write_manifest(config, out / "manifest.json")

    try:
        observed = crawl(oracle, seed_item, config["depth"])
    except CrawlInterrupted as failure:
        write_observation(failure.partial)
        raise
    write_observation(observed)


def run_topology(config) -> None:
    out = _out_dir(config)
    graph = _load_graph(config)
    histogram = topology.path_length_distribution(
        graph, sources=_histogram_sources(config, graph.n_nodes)
    )
    _write_histogram(histogram, out / "path_lengths.csv")
    scores = topology.edge_betweenness(graph)
    ranking = detection.rank_edges(graph, scores)
    io.write_scores_csv(graph, ranking.order, scores, out / "betweenness.csv")
    partition = topology.detect_communities(
        graph,
        resolution=config["resolution"],
        seed=stage_seed(config["seed"], "communities"),
    )
    lines = ["node,community"]
    lines.extend(
        f"{node},{partition.community_of(node)}" for node in range(graph.n_nodes)
    )
    (out / "communities.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    io.write_keyvalues(
        {
            "mean_path_length": io.format_float(histogram.mean_finite_distance()),
            "unreachable_pairs": histogram.unreachable_pairs,
            "sampled_sources": histogram.n_sources,
            "large_communities": topology.large_community_count(
                partition, graph, LARGE_COMMUNITY_FRACTION
            ),
            "communities": partition.n_communities,
            "high_in_degree_nodes": graph.in_degree_tail_count(
                config["degree_threshold"]
            ),
            "degree_threshold": config["degree_threshold"],
        },
        out / "topology_summary.txt",
    )
    io.write_manifest(config, out / "manifest.json")


def run_detect(config) -> None:
    out = _out_dir(config)
    graph = _load_graph(config)
    if config.get("truth"):
        graph = _apply_truth(graph, config["truth"])
    scores = topology.edge_betweenness(graph)
    ranking = detection.rank_edges(graph, scores)
    io.write_scores_csv(graph, ranking.order, scores, out / "betweenness.csv")
    curve = metrics.roc(ranking, graph)
    io.write_roc_csv(
        curve.fpr, curve.tpr, curve.auc, curve.positives, curve.negatives,
        out / "roc.csv",
    )
    baseline = detection.random_baseline(graph, stage_seed(config["seed"], "baseline"))
    baseline_curve = metrics.roc(baseline, graph)
    io.write_roc_csv(
        baseline_curve.fpr,
        baseline_curve.tpr,
        baseline_curve.auc,
        baseline_curve.positives,
        baseline_curve.negatives,
        out / "roc_baseline.csv",
    )
    recall = metrics.recall_at_fraction(ranking, graph, config["x"])
    io.write_recall_csv(config["x"], recall, out / "recall.csv")
    io.write_manifest(config, out / "manifest.json")


def run_pipeline(config) -> None:
    out = _out_dir(config)
    graph = _load_graph(config)
    if config.get("truth"):
        graph = _apply_truth(graph, config["truth"])

    scores = topology.edge_betweenness(graph)
    ranking = detection.rank_edges(graph, scores)
    io.write_scores_csv(graph, ranking.order, scores, out / "betweenness.csv")

    curve = metrics.roc(ranking, graph)
    io.write_roc_csv(
        curve.fpr, curve.tpr, curve.auc, curve.positives, curve.negatives,
        out / "roc.csv",
    )
    baseline = detection.random_baseline(graph, stage_seed(config["seed"], "baseline"))
    baseline_curve = metrics.roc(baseline, graph)
    io.write_roc_csv(
        baseline_curve.fpr,
        baseline_curve.tpr,
        baseline_curve.auc,
        baseline_curve.positives,
        baseline_curve.negatives,
        out / "roc_baseline.csv",
    )
    recall = metrics.recall_at_fraction(ranking, graph, config["x"])
    io.write_recall_csv(config["x"], recall, out / "recall.csv")

    sources = _histogram_sources(config, graph.n_nodes)
    stripped = graph.remove_labeled(EdgeLabel.BIASED)
    histograms = {}
    for name, target in (("full", graph), ("stripped", stripped)):
        histogram = topology.path_length_distribution(target, sources=sources)
        histograms[name] = histogram
        _write_histogram(histogram, out / f"path_lengths_{name}.csv")

    partition = topology.detect_communities(
        graph,
        resolution=config["resolution"],
        seed=stage_seed(config["seed"], "communities"),
    )
    io.write_keyvalues(
        {
            "auc": io.format_float(curve.auc),
            "auc_baseline": io.format_float(baseline_curve.auc),
            "recall_x": io.format_float(config["x"]),
            "recall": io.format_float(recall),
            "positives": curve.positives,
            "negatives": curve.negatives,
            "mean_path_length_full": io.format_float(
                histograms["full"].mean_finite_distance()
            ),
            "mean_path_length_stripped": io.format_float(
                histograms["stripped"].mean_finite_distance()
            ),
            "unreachable_full": histograms["full"].unreachable_pairs,
            "unreachable_stripped": histograms["stripped"].unreachable_pairs,
            "large_communities": topology.large_community_count(
                partition, graph, LARGE_COMMUNITY_FRACTION
            ),
            "communities": partition.n_communities,
        },
        out / "summary.txt",
    )
    io.write_manifest(config, out / "manifest.json")


def run_report(config) -> None:
    out = _out_dir(config)
    curves = []
    for path in config["roc"]:
        fpr, tpr, auc, positives, negatives = io.read_roc_csv(path)
        curves.append(
            metrics.RocCurve(
                fpr=fpr, tpr=tpr, auc=auc, positives=positives, negatives=negatives
            )
        )
    mean = metrics.average_curves(curves)
    io.write_roc_csv(
        mean.fpr, mean.tpr, mean.auc, mean.positives, mean.negatives,
        out / "roc_mean.csv",
    )
    reference = metrics.perfect_curve(mean.positives, mean.negatives)
    io.write_roc_csv(
        reference.fpr,
        reference.tpr,
        reference.auc,
        reference.positives,
        reference.negatives,
        out / "roc_perfect.csv",
    )
    summary = {
        f"auc_{i}": io.format_float(curve.auc) for i, curve in enumerate(curves)
    }
    summary["auc_mean"] = io.format_float(mean.auc)
    summary["inputs"] = " ".join(config["roc"])
    io.write_keyvalues(summary, out / "report.txt")
    io.write_manifest(config, out / "manifest.json")


RUNNERS = {
    "generate": run_generate,
    "crawl": run_crawl,
    "topology": run_topology,
    "detect": run_detect,
    "pipeline": run_pipeline,
    "report": run_report,
}


# ---- argument parsing ---------------------------------------------------------


# flags a fresh (non-manifest) invocation must supply, per subcommand
REQUIRED_FLAGS = {
    "generate": ("n", "k_r", "k_b", "d", "d_hidden", "overlap", "out"),
    "crawl": ("oracle", "seed_item", "depth", "out"),
    "topology": ("graph", "out"),
    "detect": ("graph", "out"),
    "pipeline": ("graph", "out"),
    "report": ("roc", "out"),
}


def _add_common(parser, with_seed=True):
    parser.add_argument("--out", help="output directory")
    if with_seed:
        parser.add_argument(
            "--seed", type=int, default=0, help="global run seed (default 0)"
        )
    parser.add_argument(
        "--manifest",
        help="re-run a previous invocation from its manifest.json (other "
        "flags ignored)",
    )


def _add_graph_input(parser):
    parser.add_argument("--graph", help="input graph TSV")
    parser.add_argument("--names", help="optional id->name sidecar for --graph")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recograph",
        description="Recommendation-graph generation, crawling, and bias tagging.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a synthetic biased graph")
    gen.add_argument("--n", type=int, help="number of items")
    gen.add_argument("--k-r", type=int, help="official out-degree")
    gen.add_argument("--k-b", type=int, help="biased out-degree")
    gen.add_argument("--d", type=int, help="official feature dim")
    gen.add_argument("--d-hidden", type=int, help="hidden feature dim")
    gen.add_argument("--overlap", type=int, help="shared leading coordinates")
    _add_common(gen)

    crawl_p = sub.add_parser("crawl", help="observe a recommender breadth-first")
    crawl_p.add_argument(
        "--oracle",
        help="file:<dump.tsv> to replay a crawl dump, synth:<params.cfg> "
        "to crawl a synthetic graph",
    )
    crawl_p.add_argument(
        "--oracle-names", help="optional id->name sidecar for a file: oracle"
    )
    crawl_p.add_argument("--seed-item", help="item to start from")
    crawl_p.add_argument("--depth", type=int, help="hop budget")
    _add_common(crawl_p, with_seed=False)

    topo = sub.add_parser("topology", help="path lengths, betweenness, communities")
    _add_graph_input(topo)
    topo.add_argument(
        "--sample",
        type=int,
        default=0,
        help="BFS source sample size for path lengths (0 = all nodes)",
    )
    topo.add_argument(
        "--resolution", type=float, default=1.0, help="community resolution"
    )
    topo.add_argument(
        "--degree-threshold",
        type=int,
        default=100,
        help="in-degree cutoff for the summary's high_in_degree_nodes count",
    )
    _add_common(topo)

    det = sub.add_parser("detect", help="rank edges and evaluate against labels")
    _add_graph_input(det)
    det.add_argument("--truth", help="edge-list file supplying ground-truth labels")
    det.add_argument(
        "--x", type=float, default=0.125, help="recall cutoff fraction (default 0.125)"
    )
    _add_common(det)

    pipe = sub.add_parser("pipeline", help="full analysis: detect + topology + summary")
    _add_graph_input(pipe)
    pipe.add_argument("--truth", help="edge-list file supplying ground-truth labels")
    pipe.add_argument("--x", type=float, default=0.125, help="recall cutoff fraction")
    pipe.add_argument(
        "--sample", type=int, default=0, help="path-length source sample (0 = all)"
    )
    pipe.add_argument(
        "--resolution", type=float, default=1.0, help="community resolution"
    )
    _add_common(pipe)

    rep = sub.add_parser("report", help="average ROC curves from earlier runs")
    rep.add_argument("--roc", nargs="+", help="ROC CSV files to average")
    _add_common(rep, with_seed=False)
    return parser


def _resolve_config(args: argparse.Namespace) -> dict:
    if args.manifest:
        config = io.read_manifest(args.manifest)
        if config.get("command") != args.command:
            raise InvalidParams(
                f"manifest is for {config.get('command')!r}, not {args.command!r}"
            )
        return config
    config = {
        key: value
        for key, value in vars(args).items()
        if key != "manifest" and value is not None
    }
    for key in REQUIRED_FLAGS[args.command]:
        if key not in config:
            flag = "--" + key.replace("_", "-")
            raise InvalidParams(f"{args.command} requires {flag}")
    return config


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _resolve_config(args)
        RUNNERS[args.command](config)
    except CrawlInterrupted as failure:
        print(
            f"error: crawl interrupted at item {failure.failed_item!r}; "
            "partial observation written",
            file=sys.stderr,
        )
        return 1
    except RecographError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
