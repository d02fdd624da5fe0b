"""Brute-force triangle counting by full triple enumeration.

Everything here walks raw node triples with no indexing tricks, so results
can be trusted as ground truth when validating the optimized counting
paths. Costs are cubic in the node count; intended for small graphs.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .graph import AttributedGraph, CommunityCollection, FeatureKind

__all__ = [
    "shares_feature_dimension",
    "triple_edge_count",
    "is_topological_triangle",
    "counts",
    "census_counts",
]


def shares_feature_dimension(graph: AttributedGraph, x: int, y: int, z: int) -> bool:
    """Literal closed-feature-triangle condition for three distinct nodes."""
    B = graph.features
    if graph.feature_kind is FeatureKind.BINARY:
        return bool(np.any((B[x] == 1.0) & (B[y] == 1.0) & (B[z] == 1.0)))
    if graph.feature_kind is FeatureKind.CONTINUOUS:
        code = -1
        for v in (x, y, z):
            row = B[v]
            if row.size == 0 or float(row.max()) <= 0.0:
                return False
            c = int(np.argmax(row))  # ties -> lowest dimension index
            if code == -1:
                code = c
            elif c != code:
                return False
        return True
    return False


def triple_edge_count(graph: AttributedGraph, x: int, y: int, z: int) -> int:
    return int(graph.has_edge(x, y)) + int(graph.has_edge(x, z)) + int(graph.has_edge(y, z))


def is_topological_triangle(graph: AttributedGraph, x: int, y: int, z: int) -> bool:
    return triple_edge_count(graph, x, y, z) == 3


def _counted_feature_triple(graph, x, y, z, min_feature_edges) -> bool:
    return (
        shares_feature_dimension(graph, x, y, z)
        and triple_edge_count(graph, x, y, z) >= min_feature_edges
    )


def counts(
    graph: AttributedGraph,
    anchor: int,
    node_set,
    min_feature_edges: int = 2,
    dedup_dual: bool = False,
) -> tuple[int, int, int, int]:
    """Return (t, vt, tf, vtf) for an anchored query by full enumeration.

    t/tf count unordered pairs drawn from ``node_set`` minus the anchor; vt/vtf
    count nodes of the set that appear in at least one qualifying triangle with
    the anchor, the third node ranging over the whole graph.
    """
    others = sorted(set(node_set) - {anchor})
    t = tf = 0
    for y, z in combinations(others, 2):
        topo = is_topological_triangle(graph, anchor, y, z)
        feat = _counted_feature_triple(graph, anchor, y, z, min_feature_edges)
        t += int(topo)
        if dedup_dual:
            tf += int(topo or feat)
        else:
            tf += int(topo) + int(feat)
    vt = vtf = 0
    for y in others:
        in_topo = False
        in_any = False
        for z in range(graph.node_count):
            if z == anchor or z == y:
                continue
            topo = is_topological_triangle(graph, anchor, y, z)
            feat = _counted_feature_triple(graph, anchor, y, z, min_feature_edges)
            in_topo = in_topo or topo
            in_any = in_any or topo or feat
            if in_topo and in_any:
                break
        vt += int(in_topo)
        vtf += int(in_any)
    return t, vt, tf, vtf


def census_counts(
    graph: AttributedGraph,
    ground_truth: CommunityCollection,
    min_feature_edges: int = 0,
):
    """Whole-graph census by triple enumeration.

    Returns (topo_in_gt, topo_same, feat_in_gt, feat_same, breakdown) where
    breakdown[e] counts same-community feature triples with exactly e edges.
    """
    covered = ground_truth.covered_nodes()
    memb = [set() for _ in range(graph.node_count)]
    for k, c in enumerate(ground_truth):
        for v in c:
            memb[v].add(k)
    topo_in_gt = topo_same = feat_in_gt = feat_same = 0
    breakdown = [0, 0, 0, 0]
    for x, y, z in combinations(range(graph.node_count), 3):
        in_gt = x in covered and y in covered and z in covered
        if not in_gt:
            continue
        same = bool(memb[x] & memb[y] & memb[z])
        e = triple_edge_count(graph, x, y, z)
        if e == 3:
            topo_in_gt += 1
            topo_same += int(same)
        if shares_feature_dimension(graph, x, y, z) and e >= min_feature_edges:
            feat_in_gt += 1
            if same:
                feat_same += 1
                breakdown[e] += 1
    return topo_in_gt, topo_same, feat_in_gt, feat_same, tuple(breakdown)
