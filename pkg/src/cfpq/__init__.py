"""Context-free path querying over edge-labeled directed graphs.

Queries are context-free grammars; the engine parses the graph with a
generalized top-down strategy and returns a shared packed parse forest
holding every matched path, from which reachability pairs, concrete paths
and matched subgraphs are extracted.
"""

from .engine import BoundCheck, EngineStats, QueryEngine, run_query, size_audit
from .grammar import (
    Grammar,
    GrammarError,
    GrammarSlot,
    ParseTable,
    Production,
    build_parse_table,
    compute_first,
    compute_follow,
    compute_nullable,
    parse_grammar,
)
from .graph import (
    Edge,
    Graph,
    GraphFormatError,
    Path,
    complete_graph,
    format_path,
    load_ntriples,
    load_tsv,
    word,
)
from .oracle import accepts, hellings_pairs, hellings_slice
from .results import (
    PathQueryLimits,
    QueryResult,
    enumerate_paths,
    extract_subgraph,
    format_triples,
    reachable_pairs,
)
from .sppf import DUMMY, ForestSnapshot, Sppf, SppfStats, export_dot, export_json, load_json

__version__ = "0.1.0"

__all__ = [
    "BoundCheck",
    "DUMMY",
    "Edge",
    "EngineStats",
    "ForestSnapshot",
    "Grammar",
    "GrammarError",
    "GrammarSlot",
    "Graph",
    "GraphFormatError",
    "ParseTable",
    "Path",
    "PathQueryLimits",
    "Production",
    "QueryEngine",
    "QueryResult",
    "Sppf",
    "SppfStats",
    "accepts",
    "build_parse_table",
    "complete_graph",
    "compute_first",
    "compute_follow",
    "compute_nullable",
    "enumerate_paths",
    "export_dot",
    "export_json",
    "extract_subgraph",
    "format_path",
    "format_triples",
    "hellings_pairs",
    "hellings_slice",
    "load_json",
    "load_ntriples",
    "load_tsv",
    "parse_grammar",
    "reachable_pairs",
    "run_query",
    "size_audit",
    "word",
]
