"""Widest-path preference aggregation over weighted tournament graphs.

Computes winner sets of the widest-path (beatpath) method with a
vertex-centric bulk-synchronous engine, alongside sequential reference
implementations (widest paths, ranked pairs, Schwartz set), file ingestion,
and synthetic instance generators.
"""

from .core import (
    Candidate,
    DominanceGraph,
    MarginMatrix,
    PreferenceProfile,
    WeakOrder,
    WeightedTournament,
    borda_id_order,
    build_tournament,
    dominance_graph,
    majority_margins,
    margins_from_tournament,
    relabel_tournament,
)
from .oracles import (
    EmasInstance,
    RankedPairsResult,
    TieBreakOrder,
    WidestPathMatrix,
    emas,
    ranked_pairs,
    schulze_ranking,
    schulze_winners_seq,
    schwartz_set,
    widest_paths,
    wp_geq,
    wp_gt,
)
from .schulze import (
    INF,
    SchulzeRunResult,
    SchulzeVertexState,
    Status,
    schulze_run,
    schulze_winners,
    top_k,
)
from .ingest import (
    ChartRecord,
    ParseError,
    parse_profile,
    parse_tournament,
    profile_from_charts,
    read_chart_csv,
    write_profile,
    write_tournament,
)
from .generators import (
    mcgarvey_profile,
    random_digraph,
    random_emas_instance,
    random_profile,
    random_tournament,
    reduce_emas,
    reduce_reachability,
)

__version__ = "0.1.0"

__all__ = [
    "Candidate",
    "WeakOrder",
    "PreferenceProfile",
    "MarginMatrix",
    "WeightedTournament",
    "DominanceGraph",
    "majority_margins",
    "build_tournament",
    "dominance_graph",
    "margins_from_tournament",
    "borda_id_order",
    "relabel_tournament",
    "WidestPathMatrix",
    "TieBreakOrder",
    "EmasInstance",
    "RankedPairsResult",
    "widest_paths",
    "wp_geq",
    "wp_gt",
    "schulze_winners_seq",
    "schulze_ranking",
    "ranked_pairs",
    "schwartz_set",
    "emas",
    "INF",
    "Status",
    "SchulzeVertexState",
    "SchulzeRunResult",
    "schulze_run",
    "schulze_winners",
    "top_k",
    "ParseError",
    "ChartRecord",
    "parse_profile",
    "write_profile",
    "parse_tournament",
    "write_tournament",
    "profile_from_charts",
    "read_chart_csv",
    "mcgarvey_profile",
    "random_tournament",
    "random_profile",
    "random_digraph",
    "random_emas_instance",
    "reduce_reachability",
    "reduce_emas",
    "__version__",
]
