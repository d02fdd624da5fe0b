"""Triangle-oriented community detection for attributed networks."""

__version__ = "0.1.0"

from .evaluation import (
    MetricsReport,
    UndefinedMetricError,
    avg_f1,
    density,
    entropy,
    evaluate,
    modularity,
    overlaps_stat,
)
from .graph import (
    AttributedGraph,
    CommunityCollection,
    FeatureKind,
    GraphParseError,
    GraphValidationError,
    attach_features,
    build_graph,
    load_communities,
    load_edge_list,
    write_communities,
)
from .local_search import (
    CommunityState,
    LsfConfig,
    LsfResult,
    Mode,
    assign_labels,
    candidate_labels,
    filter_candidates,
    initialize,
    run,
    update_cumulative_utilities,
)
from .metrics import (
    UtilityBreakdown,
    homogeneity,
    node_utility,
    objective,
    tightness,
    wcc_node,
    wcc_partition,
    wcc_star_node,
)
from .triangles import (
    CensusReport,
    NoFeaturesError,
    TriangleQuery,
    census,
    count_t,
    count_tf,
    count_vt,
    count_vtf,
    is_feature_triangle,
)

__all__ = [
    "__version__",
    "AttributedGraph",
    "CommunityCollection",
    "FeatureKind",
    "GraphParseError",
    "GraphValidationError",
    "attach_features",
    "build_graph",
    "load_communities",
    "load_edge_list",
    "write_communities",
    "TriangleQuery",
    "CensusReport",
    "NoFeaturesError",
    "census",
    "count_t",
    "count_tf",
    "count_vt",
    "count_vtf",
    "is_feature_triangle",
    "UtilityBreakdown",
    "wcc_node",
    "wcc_partition",
    "wcc_star_node",
    "tightness",
    "homogeneity",
    "node_utility",
    "objective",
    "Mode",
    "LsfConfig",
    "CommunityState",
    "LsfResult",
    "initialize",
    "candidate_labels",
    "update_cumulative_utilities",
    "filter_candidates",
    "assign_labels",
    "run",
    "MetricsReport",
    "UndefinedMetricError",
    "avg_f1",
    "modularity",
    "density",
    "entropy",
    "overlaps_stat",
    "evaluate",
]
