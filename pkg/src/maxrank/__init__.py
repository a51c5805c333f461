"""PageRank and MaxRank link analysis on sparse directed graphs."""

from .analysis import (CoreStats, InfluenceProfile, core_size_sweep, core_stats,
                       influenced_ratios, loglog_histogram, tbb_vs_outdegree)
from .compare import (DEFAULT_SCHEDULE, RankComparison, compare_sweep, kendall_tau_topk,
                      top_k_overlap)
from .graph import Graph, GraphError, IngestOptions, ParseError, parse_edge_list, read_edge_list
from .ranker import RankError, RankParams, RankResult, maxrank_iterate, pagerank, solve

__version__ = "0.1.0"
