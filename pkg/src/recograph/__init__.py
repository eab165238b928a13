"""recograph: recommendation-graph analytics and bias tagging.

Build or ingest directed recommendation graphs, generate synthetic graphs
with covertly injected edges, observe recommenders by bounded crawling,
and evaluate how well centrality rankings recover the injected edges.
"""
from .crawl import (
    DumpOracle,
    GraphOracle,
    ObservedGraph,
    RecommendationOracle,
    crawl,
    redundancy,
    redundancy_value,
    tree_bound,
)
from .datasets import (
    FeatureTable,
    ModelParams,
    build_biased_graph,
    generate_features,
    knn_neighbors,
    make_biased_graph,
)
from .detection import BetweennessEdgeDetector, EdgeRanking, random_baseline, rank_edges
from .exceptions import (
    CrawlInterrupted,
    DegenerateTruth,
    IncompleteScores,
    InvalidEdge,
    InvalidParams,
    LabelConflict,
    RecographError,
)
from .graph import Edge, EdgeLabel, GraphBuilder, RecGraph
from .metrics import RocCurve, average_curves, perfect_curve, recall_at_fraction, roc
from .topology import (
    ALL,
    Partition,
    PathLengthHistogram,
    Sample,
    detect_communities,
    edge_betweenness,
    large_community_count,
    path_length_distribution,
)
from .utils import stage_seed

__version__ = "0.1.0"

__all__ = [
    "ALL",
    "BetweennessEdgeDetector",
    "CrawlInterrupted",
    "DegenerateTruth",
    "DumpOracle",
    "Edge",
    "EdgeLabel",
    "EdgeRanking",
    "FeatureTable",
    "GraphBuilder",
    "GraphOracle",
    "IncompleteScores",
    "InvalidEdge",
    "InvalidParams",
    "LabelConflict",
    "ModelParams",
    "ObservedGraph",
    "Partition",
    "PathLengthHistogram",
    "RecGraph",
    "RecographError",
    "RecommendationOracle",
    "RocCurve",
    "Sample",
    "average_curves",
    "build_biased_graph",
    "crawl",
    "detect_communities",
    "edge_betweenness",
    "generate_features",
    "knn_neighbors",
    "large_community_count",
    "make_biased_graph",
    "path_length_distribution",
    "perfect_curve",
    "random_baseline",
    "rank_edges",
    "recall_at_fraction",
    "redundancy",
    "redundancy_value",
    "roc",
    "stage_seed",
    "tree_bound",
]
