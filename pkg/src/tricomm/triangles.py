"""Closed topological and feature triangle counting.

Anchored queries return the four quantities the quality metrics are built
from: t and vt (topological), tf and vtf (topological plus feature). The
whole-graph census reproduces the ground-truth triangle statistics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import AttributedGraph, CommunityCollection, FeatureKind

__all__ = [
    "NoFeaturesError",
    "TriangleQuery",
    "CensusReport",
    "is_feature_triangle",
    "count_t",
    "count_vt",
    "count_tf",
    "count_vtf",
    "census",
]


class NoFeaturesError(ValueError):
    """The operation needs node features but the graph carries none."""


@dataclass(frozen=True)
class TriangleQuery:
    """An anchored counting query over a node set.

    ``min_feature_edges`` is the number of topological edges a triple must
    contain before its shared feature makes it count as a feature triangle.
    ``dedup_dual`` switches tf from summing the two triangle types to
    counting a dual-type triple once.
    """

    anchor: int
    node_set: frozenset[int]
    min_feature_edges: int = 2
    dedup_dual: bool = False

    def __post_init__(self):
        if self.min_feature_edges not in (0, 1, 2, 3):
            raise ValueError("min_feature_edges must be in 0..3")
        object.__setattr__(self, "node_set", frozenset(self.node_set))


@dataclass(frozen=True)
class CensusReport:
    """Triangle census against a ground-truth cover."""

    topo_in_groundtruth: int
    topo_same_community: int
    feat_in_groundtruth: int
    feat_same_community: int
    feat_edge_breakdown: tuple[int, int, int, int]
    min_feature_edges: int = 0

    def to_dict(self) -> dict:
        return {
            "topo_in_groundtruth": self.topo_in_groundtruth,
            "topo_same_community": self.topo_same_community,
            "feat_in_groundtruth": self.feat_in_groundtruth,
            "feat_same_community": self.feat_same_community,
            "feat_edge_breakdown": list(self.feat_edge_breakdown),
            "min_feature_edges": self.min_feature_edges,
        }


# -- feature signatures ------------------------------------------------------

def feature_codes(graph: AttributedGraph) -> np.ndarray:
    """Dominant-dimension code per node for continuous features (-1: none).

    Argmax ties break to the lowest dimension index.
    """
    B = graph.features
    if B.shape[1] == 0:
        return np.full(graph.node_count, -1, dtype=np.int64)
    codes = np.argmax(B, axis=1).astype(np.int64)
    codes[B.max(axis=1) <= 0.0] = -1
    return codes


def _support_sets(graph: AttributedGraph) -> list[frozenset[int]]:
    """Per-node set of feature dimensions that participate in Definition-1 tests."""
    if graph.feature_kind is FeatureKind.BINARY:
        return [frozenset(np.nonzero(row == 1.0)[0].tolist()) for row in graph.features]
    if graph.feature_kind is FeatureKind.CONTINUOUS:
        codes = feature_codes(graph)
        return [frozenset() if c < 0 else frozenset((int(c),)) for c in codes]
    return [frozenset() for _ in range(graph.node_count)]


def is_feature_triangle(graph: AttributedGraph, v_x: int, v_y: int, v_z: int) -> bool:
    """Whether three distinct nodes share a feature dimension (Definition-1 sense).

    Binary features share a dimension where all three rows are 1; continuous
    features must agree on their dominant (argmax) dimension with positive
    values. Raises :class:`NoFeaturesError` if the graph has no features.
    """
    if graph.feature_kind is FeatureKind.NONE:
        raise NoFeaturesError("graph has no node features")
    if len({v_x, v_y, v_z}) != 3:
        raise ValueError("nodes of a triple must be distinct")
    B = graph.features
    if graph.feature_kind is FeatureKind.BINARY:
        return bool(np.any((B[v_x] == 1.0) & (B[v_y] == 1.0) & (B[v_z] == 1.0)))
    for v in (v_x, v_y, v_z):
        if float(B[v].max()) <= 0.0:
            return False
    a = int(np.argmax(B[v_x]))
    return a == int(np.argmax(B[v_y])) and a == int(np.argmax(B[v_z]))


# -- anchored counting -------------------------------------------------------

def _nbr_set(graph, v) -> set[int]:
    return set(graph.neighbors(v).tolist())


def _shared3(supports, a, y, z) -> bool:
    return bool(supports[a] & supports[y] & supports[z])


def _topo_pairs(graph, anchor, members: set[int]):
    """Yield pairs {y, z} from ``members`` closing a topological triangle with anchor."""
    nbrs = [y for y in graph.neighbors(anchor).tolist() if y in members]
    nbr_set = set(nbrs)
    for i, y in enumerate(nbrs):
        ny = _nbr_set(graph, y)
        for z in nbrs[i + 1 :]:
            if z in ny:
                yield y, z


def _feature_pairs(graph, anchor, members: set[int], mfe: int, supports):
    """Yield pairs {y, z} from ``members`` forming a counted feature triple with anchor."""
    if not supports[anchor]:
        return
    if mfe >= 2:
        nbrs = [y for y in graph.neighbors(anchor).tolist() if y in members]
        nbr_all = _nbr_set(graph, anchor)
        for i, y in enumerate(nbrs):
            ny = _nbr_set(graph, y)
            for z in nbrs[i + 1 :]:
                if mfe == 3 and z not in ny:
                    continue
                if _shared3(supports, anchor, y, z):
                    yield y, z
            if mfe == 2:
                for z in sorted(ny - nbr_all):
                    if z != anchor and z in members and _shared3(supports, anchor, y, z):
                        yield y, z
    else:
        # Feature partners must share a dimension with the anchor individually.
        pool = sorted(y for y in members if y != anchor and (supports[anchor] & supports[y]))
        for i, y in enumerate(pool):
            for z in pool[i + 1 :]:
                if not _shared3(supports, anchor, y, z):
                    continue
                if mfe == 0:
                    yield y, z
                else:
                    edges = (
                        int(graph.has_edge(anchor, y))
                        + int(graph.has_edge(anchor, z))
                        + int(graph.has_edge(y, z))
                    )
                    if edges >= 1:
                        yield y, z


def count_t(graph: AttributedGraph, query: TriangleQuery) -> int:
    """Topological triangles through the anchor with both other nodes in the set."""
    members = set(query.node_set) - {query.anchor}
    return sum(1 for _ in _topo_pairs(graph, query.anchor, members))


def count_vt(graph: AttributedGraph, query: TriangleQuery) -> int:
    """Nodes of the set closing at least one topological triangle with the anchor.

    The third node of the witnessing triangle may lie anywhere in the graph.
    """
    a = query.anchor
    members = set(query.node_set) - {a}
    nbr_a = _nbr_set(graph, a)
    out = 0
    for y in members & nbr_a:
        if nbr_a & _nbr_set(graph, y):
            out += 1
    return out


def count_tf(graph: AttributedGraph, query: TriangleQuery) -> int:
    """Counted triangles (topological plus qualifying feature) through the anchor.

    A triple that is both types contributes twice unless ``dedup_dual``.
    Graphs without features degrade to the purely topological count.
    """
    a = query.anchor
    members = set(query.node_set) - {a}
    topo = set()
    for y, z in _topo_pairs(graph, a, members):
        topo.add((y, z) if y < z else (z, y))
    if graph.feature_kind is FeatureKind.NONE:
        return len(topo)
    supports = _support_sets(graph)
    feat = set()
    for y, z in _feature_pairs(graph, a, members, query.min_feature_edges, supports):
        feat.add((y, z) if y < z else (z, y))
    if query.dedup_dual:
        return len(topo | feat)
    return len(topo) + len(feat)


def _is_partner(graph, a, y, mfe, supports, nbr_a: set[int]) -> bool:
    """Whether some third node completes a counted triangle on the pair (a, y)."""
    ny = _nbr_set(graph, y)
    if y in nbr_a and (nbr_a & ny):
        return True  # topological witness
    if graph.feature_kind is FeatureKind.NONE or not (supports[a] & supports[y]):
        return False
    if mfe == 3:
        cands = (nbr_a & ny) if y in nbr_a else set()
    elif mfe == 2:
        cands = (nbr_a | ny) if y in nbr_a else (nbr_a & ny)
    elif mfe == 1:
        cands = set(range(graph.node_count)) if y in nbr_a else (nbr_a | ny)
    else:
        cands = set(range(graph.node_count))
    for z in cands:
        if z != a and z != y and _shared3(supports, a, y, z):
            return True
    return False


def count_vtf(graph: AttributedGraph, query: TriangleQuery) -> int:
    """Nodes of the set in at least one counted triangle of either type with the anchor."""
    a = query.anchor
    members = set(query.node_set) - {a}
    supports = _support_sets(graph) if graph.feature_kind is not FeatureKind.NONE else None
    nbr_a = _nbr_set(graph, a)
    out = 0
    for y in members:
        if supports is None:
            if y in nbr_a and (nbr_a & _nbr_set(graph, y)):
                out += 1
        elif _is_partner(graph, a, y, query.min_feature_edges, supports, nbr_a):
            out += 1
    return out


# -- whole-graph census ------------------------------------------------------

def census(
    graph: AttributedGraph,
    ground_truth: CommunityCollection,
    min_feature_edges: int = 0,
) -> CensusReport:
    """Count ground-truth triangles of both types.

    ``*_in_groundtruth`` requires all three nodes to appear in some community;
    ``*_same_community`` requires a community containing all three. Triples
    inside several communities are counted once. Feature counts honor
    ``min_feature_edges`` (0 counts every shared-feature triple).
    """
    if graph.feature_kind is FeatureKind.NONE:
        raise NoFeaturesError("census requires node features")
    from . import _kernels as K

    masks = K.pack_feature_masks(graph)
    memb_masks = K.pack_membership_masks(graph.node_count, ground_truth)
    topo_in_gt, topo_same = K.topo_census(
        graph.adj_indptr, graph.adj_indices, memb_masks
    )
    cm_indptr, cm_members = K.community_member_csr(ground_truth)
    breakdown = K.community_feature_census(
        cm_indptr,
        cm_members,
        masks,
        memb_masks,
        graph.adj_indptr,
        graph.adj_indices,
        min_feature_edges,
    )
    feat_same = int(breakdown.sum())
    feat_in_gt = K.global_feature_count(graph, masks, memb_masks, min_feature_edges)
    return CensusReport(
        topo_in_groundtruth=int(topo_in_gt),
        topo_same_community=int(topo_same),
        feat_in_groundtruth=int(feat_in_gt),
        feat_same_community=feat_same,
        feat_edge_breakdown=tuple(int(x) for x in breakdown),
        min_feature_edges=min_feature_edges,
    )
