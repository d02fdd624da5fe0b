"""Quality metrics: WCC, its feature-triangle extension, and node utility.

All functions are pure and operate on immutable graph snapshots plus plain
node sets, so they can be called concurrently. ``node_utility`` applies
candidate semantics: the node is treated as hypothetically added to the
community before any term is evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import AttributedGraph, CommunityCollection
from .triangles import TriangleQuery, count_t, count_tf, count_vt, count_vtf

__all__ = [
    "UtilityBreakdown",
    "wcc_node",
    "wcc_partition",
    "wcc_star_node",
    "tightness",
    "homogeneity",
    "node_utility",
    "objective",
]


@dataclass(frozen=True)
class UtilityBreakdown:
    wcc_star: float
    tightness: float
    homogeneity: float

    @property
    def utility(self) -> float:
        return self.wcc_star + self.tightness - self.homogeneity


def wcc_node(graph: AttributedGraph, v: int, community) -> float:
    """Degree of belonging of ``v`` to the community, by topological triangles."""
    community = set(community)
    all_nodes = frozenset(range(graph.node_count))
    t_all = count_t(graph, TriangleQuery(v, all_nodes))
    if t_all == 0:
        return 0.0
    t_in = count_t(graph, TriangleQuery(v, frozenset(community)))
    vt_all = count_vt(graph, TriangleQuery(v, all_nodes))
    vt_out = count_vt(graph, TriangleQuery(v, all_nodes - community))
    denom = len(community - {v}) + vt_out
    if denom == 0:
        return 0.0
    return (t_in / t_all) * (vt_all / denom)


def wcc_partition(graph: AttributedGraph, cover: CommunityCollection) -> float:
    """Size-weighted mean of per-node scores over the whole cover."""
    if graph.node_count == 0:
        return 0.0
    total = 0.0
    for c in cover:
        for v in c:
            total += wcc_node(graph, v, c)
    return total / graph.node_count


def wcc_star_node(
    graph: AttributedGraph,
    v: int,
    community,
    min_feature_edges: int = 2,
    dedup_dual: bool = False,
) -> float:
    """Extended score counting both triangle types over the neighborhood union.

    The denominator set is NC, the anchor's neighbors united with the
    community. Graphs without features fall back to topological counting.
    """
    community = frozenset(community)
    nbrs = frozenset(graph.neighbors(v).tolist())
    nc = nbrs | community
    tf_nc = count_tf(graph, TriangleQuery(v, nc, min_feature_edges, dedup_dual))
    if tf_nc == 0:
        return 0.0
    tf_in = count_tf(graph, TriangleQuery(v, community, min_feature_edges, dedup_dual))
    vtf_nc = count_vtf(graph, TriangleQuery(v, nc, min_feature_edges, dedup_dual))
    vtf_nbrs = count_vtf(graph, TriangleQuery(v, nbrs, min_feature_edges, dedup_dual))
    denom = len(community - {v}) + vtf_nbrs
    if denom == 0:
        return 0.0
    return (tf_in / tf_nc) * (vtf_nc / denom)


def tightness(graph: AttributedGraph, v: int, community) -> float:
    """Fraction of possible edges from ``v`` into the community, size-normalized."""
    community = set(community)
    d = graph.degree(v)
    if d == 0 or not community:
        return 0.0
    inside = sum(1 for y in graph.neighbors(v).tolist() if y in community)
    return inside / (d * len(community))


def homogeneity(graph: AttributedGraph, v: int, community) -> float:
    """Mean L1 feature distance from ``v`` to the community members."""
    community = set(community)
    p = graph.feature_dim
    if p == 0 or not community:
        return 0.0
    B = graph.features
    members = np.fromiter(community, dtype=np.int64, count=len(community))
    dist = float(np.abs(B[members] - B[v]).sum())
    return dist / (p * len(community))


def node_utility(
    graph: AttributedGraph,
    v: int,
    community,
    min_feature_edges: int = 2,
    dedup_dual: bool = False,
) -> UtilityBreakdown:
    """Utility of ``v`` in the community, with ``v`` hypothetically added first."""
    c_eff = frozenset(community) | {v}
    return UtilityBreakdown(
        wcc_star=wcc_star_node(graph, v, c_eff, min_feature_edges, dedup_dual),
        tightness=tightness(graph, v, c_eff),
        homogeneity=homogeneity(graph, v, c_eff),
    )


def objective(
    graph: AttributedGraph,
    cover: CommunityCollection,
    min_feature_edges: int = 2,
    dedup_dual: bool = False,
) -> float:
    """Total utility over all memberships; one term per (node, community) pair."""
    total = 0.0
    for c in cover:
        for v in c:
            total += node_utility(graph, v, c, min_feature_edges, dedup_dual).utility
    return total
